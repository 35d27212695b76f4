//! The edit classes as AST rewrites. Each rewrite picks a random applicable
//! site and returns `None` when the tree has none.

use super::build;
use super::names::{NamePool, BASE_NAMES, FLOATS, INTS};
use crate::minilang::random::{binary, parenthesize_for};
use crate::minilang::{
    parse_source, pretty_print, tokenize, AstNode, BinaryOp, NodeKind, TokenKind, UnaryOp,
    UNARY_PRECEDENCE,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// True when printing and re-parsing reproduces the tree exactly.
pub fn reparses(ast: &AstNode) -> bool {
    parse_source(&pretty_print(ast)).is_ok_and(|t| &t == ast)
}

fn set_at(root: &mut AstNode, path: &[usize], mut node: AstNode) {
    let slot = root.at_mut(path).expect("valid path");
    node.sibling_index = slot.sibling_index;
    *slot = node;
}

fn with_children(node: &AstNode, children: Vec<AstNode>) -> AstNode {
    let mut n = AstNode::branch(node.kind, children);
    n.sibling_index = node.sibling_index;
    n
}

fn tokens_of(ast: &AstNode) -> Vec<&str> {
    ast.leaves().iter().filter_map(|l| l.token()).collect()
}

fn is_name(node: &AstNode) -> bool {
    node.kind == NodeKind::NameExpression && !matches!(node.token(), Some("this" | "super"))
}

fn numeric_kind(token: &str) -> Option<TokenKind> {
    match tokenize(token).ok()?.as_slice() {
        [t] if matches!(t.kind, TokenKind::IntLiteral | TokenKind::FloatLiteral) => Some(t.kind),
        _ => None,
    }
}

/// Tries the sites in random order and returns the first rewrite that
/// changes the tree and still round-trips through the printer.
fn first_valid<R: Rng>(
    ast: &AstNode,
    mut sites: Vec<Vec<usize>>,
    rng: &mut R,
    mut rewrite: impl FnMut(&AstNode, &[usize], &mut R) -> Option<AstNode>,
) -> Option<AstNode> {
    sites.shuffle(rng);
    sites
        .into_iter()
        .filter_map(|site| rewrite(ast, &site, rng))
        .find(|t| t != ast && reparses(t))
}

fn replace_leaf<R: Rng>(
    ast: &AstNode,
    sites: Vec<Vec<usize>>,
    rng: &mut R,
    fresh: impl Fn(&mut R, &[&str]) -> Option<AstNode>,
) -> Option<AstNode> {
    let used: Vec<String> = tokens_of(ast).into_iter().map(String::from).collect();
    first_valid(ast, sites, rng, |ast, site, rng| {
        let avoid: Vec<&str> = used.iter().map(String::as_str).collect();
        let node = fresh(rng, &avoid)?;
        let mut t = ast.clone();
        set_at(&mut t, site, node);
        Some(t)
    })
}

fn child_paths(ast: &AstNode, pred: &dyn Fn(&AstNode) -> bool, child: &[usize]) -> Vec<Vec<usize>> {
    ast.find_paths(pred)
        .into_iter()
        .map(|mut p| {
            p.extend_from_slice(child);
            p
        })
        .collect()
}

fn operator_group(op: BinaryOp) -> &'static [BinaryOp] {
    use BinaryOp::*;
    match op {
        Plus | Minus | Times | Divide | Remainder => &[Plus, Minus, Times, Divide, Remainder],
        Less | LessEquals | Greater | GreaterEquals | Equals | NotEquals => {
            &[Less, LessEquals, Greater, GreaterEquals, Equals, NotEquals]
        }
        And | Or => &[And, Or],
        BitAnd | BitOr | Xor => &[BitAnd, BitOr, Xor],
        LeftShift | RightShift => &[LeftShift, RightShift],
        Is => &[],
    }
}

fn is_call(n: &AstNode) -> bool {
    n.kind == NodeKind::MethodCallExpression
}

/// Applies one of the 11 bug-fix templates.
pub fn apply_sstub(label: &str, ast: &AstNode, p: &NamePool, rng: &mut impl Rng) -> Option<AstNode> {
    match label {
        "change caller in function call" => {
            let sites = child_paths(
                ast,
                &|n| is_call(n) && n.children[0].kind == NodeKind::MemberAccess && is_name(&n.children[0].children[0]),
                &[0, 0],
            );
            replace_leaf(ast, sites, rng, |rng, avoid| p.variable_except(rng, avoid).map(AstNode::name))
        }
        "change numeral" => {
            let sites = ast.find_paths(&|n| n.kind == NodeKind::Literal && n.token().and_then(numeric_kind).is_some());
            first_valid(ast, sites, rng, |ast, site, rng| {
                let old = ast.at(site)?.token()?;
                let pool: &[&str] = if numeric_kind(old) == Some(TokenKind::FloatLiteral) { &FLOATS } else { &INTS };
                let options: Vec<&&str> = pool.iter().filter(|s| **s != old).collect();
                let mut t = ast.clone();
                set_at(&mut t, site, AstNode::literal(**options.choose(rng)?));
                Some(t)
            })
        }
        "change operand" => {
            let mut sites = Vec::new();
            for side in [0, 1] {
                sites.extend(child_paths(
                    ast,
                    &|n| matches!(n.kind, NodeKind::BinaryExpression(op) if op != BinaryOp::Is) && is_name(&n.children[side]),
                    &[side],
                ));
            }
            replace_leaf(ast, sites, rng, |rng, avoid| p.variable_except(rng, avoid).map(AstNode::name))
        }
        "change operator" => {
            let sites = ast.find_paths(&|n| matches!(n.kind, NodeKind::BinaryExpression(op) if operator_group(op).len() > 1));
            first_valid(ast, sites, rng, |ast, site, rng| {
                let node = ast.at(site)?;
                let NodeKind::BinaryExpression(op) = node.kind else { return None };
                let options: Vec<&BinaryOp> = operator_group(op).iter().filter(|o| **o != op).collect();
                let new_op = **options.choose(rng)?;
                let mut t = ast.clone();
                set_at(&mut t, site, binary(new_op, node.children[0].clone(), node.children[1].clone()));
                Some(t)
            })
        }
        "different method same args" => {
            let mut sites = child_paths(ast, &|n| is_call(n) && is_name(&n.children[0]), &[0]);
            sites.extend(child_paths(
                ast,
                &|n| {
                    is_call(n)
                        && matches!(n.children[0].kind, NodeKind::MemberAccess | NodeKind::ConditionalAccess)
                },
                &[0, 1],
            ));
            replace_leaf(ast, sites, rng, |rng, avoid| p.method_except(rng, avoid).map(AstNode::name))
        }
        "less specific if" | "more specific if" => {
            let op = if label == "less specific if" { BinaryOp::Or } else { BinaryOp::And };
            let sites = child_paths(ast, &|n| n.kind == NodeKind::IfCondition, &[0]);
            first_valid(ast, sites, rng, |ast, site, rng| {
                let cond = ast.at(site)?.clone();
                let extra = build::condition(p, rng);
                let mut t = ast.clone();
                set_at(&mut t, site, binary(op, cond, extra));
                Some(t)
            })
        }
        "overload method deleted args" => {
            let sites = ast.find_paths(&|n| is_call(n) && n.children.len() >= 2);
            first_valid(ast, sites, rng, |ast, site, rng| {
                let node = ast.at(site)?;
                let mut children = node.children.clone();
                children.remove(rng.random_range(1..children.len()));
                let mut t = ast.clone();
                set_at(&mut t, site, with_children(node, children));
                Some(t)
            })
        }
        "overload method more args" => {
            let sites = ast.find_paths(&is_call);
            first_valid(ast, sites, rng, |ast, site, rng| {
                let node = ast.at(site)?;
                let mut children = node.children.clone();
                let at = if rng.random_bool(0.7) { children.len() } else { rng.random_range(1..=children.len()) };
                children.insert(at, build::argument(p, rng));
                let mut t = ast.clone();
                set_at(&mut t, site, with_children(node, children));
                Some(t)
            })
        }
        "swap arguments" => {
            let sites = ast.find_paths(&|n| is_call(n) && n.children.len() >= 3);
            first_valid(ast, sites, rng, |ast, site, rng| {
                let node = ast.at(site)?;
                let n = node.children.len();
                let mut pairs: Vec<(usize, usize)> = (1..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| !node.children[i].same_tokens(&node.children[j]))
                    .collect();
                pairs.shuffle(rng);
                let (i, j) = *pairs.first()?;
                let mut children = node.children.clone();
                children.swap(i, j);
                let mut t = ast.clone();
                set_at(&mut t, site, with_children(node, children));
                Some(t)
            })
        }
        "swap boolean literal" => {
            let sites = ast.find_paths(&|n| n.kind == NodeKind::Literal && matches!(n.token(), Some("true" | "false")));
            first_valid(ast, sites, rng, |ast, site, _| {
                let flipped = if ast.at(site)?.token()? == "true" { "false" } else { "true" };
                let mut t = ast.clone();
                set_at(&mut t, site, AstNode::literal(flipped));
                Some(t)
            })
        }
        _ => None,
    }
}

trait SameTokens {
    fn same_tokens(&self, other: &Self) -> bool;
}

impl SameTokens for AstNode {
    fn same_tokens(&self, other: &Self) -> bool {
        self == other || (self.same_shape(other) && tokens_of(self) == tokens_of(other))
    }
}

/// Renames variable references `from` → `to` below `node`, leaving member
/// names (`a.from`) alone.
fn rename_refs(node: &mut AstNode, from: &str, to: &str) {
    if node.token() == Some(from) && node.kind == NodeKind::NameExpression {
        node.terminal_token = Some(to.to_string());
        return;
    }
    let skip_member = matches!(node.kind, NodeKind::MemberAccess | NodeKind::ConditionalAccess);
    for (i, c) in node.children.iter_mut().enumerate() {
        if !(skip_member && i == 1) {
            rename_refs(c, from, to);
        }
    }
}

fn count_refs(node: &AstNode, name: &str) -> usize {
    let mut probe = node.clone();
    rename_refs(&mut probe, name, "\u{0}");
    probe.leaves().iter().filter(|l| l.token() == Some("\u{0}")).count()
}

fn is_paren(n: &AstNode) -> bool {
    n.kind == NodeKind::ParenthesizedExpression
}

fn is_binary(n: &AstNode, ops: &[BinaryOp]) -> bool {
    matches!(n.kind, NodeKind::BinaryExpression(op) if ops.contains(&op))
}

fn is_null(n: &AstNode) -> bool {
    n.kind == NodeKind::Literal && n.token() == Some("null")
}

/// Pairs (outer, inner) where the inner operation gets explicit parentheses.
fn precedence_pair(outer: BinaryOp, inner: BinaryOp) -> bool {
    use BinaryOp::*;
    matches!(
        (outer, inner),
        (Or, And)
            | (Plus | Minus, Times | Divide | Remainder)
            | (BitOr, BitAnd | Xor)
            | (Xor, BitAnd)
            | (LeftShift | RightShift, Plus | Minus | Times | Divide)
    )
}

/// Converts the `a.m` at the head of `node` (a call or member access on
/// `a`) into `a?.m`.
fn to_conditional(node: &AstNode, receiver: &str) -> Option<AstNode> {
    let access = match node.kind {
        NodeKind::MethodCallExpression => &node.children[0],
        NodeKind::MemberAccess => node,
        _ => return None,
    };
    if access.kind != NodeKind::MemberAccess || access.children[0].token() != Some(receiver) {
        return None;
    }
    let cond = AstNode::branch(NodeKind::ConditionalAccess, access.children.clone());
    Some(match node.kind {
        NodeKind::MethodCallExpression => {
            let mut children = node.children.clone();
            children[0] = cond;
            AstNode::branch(NodeKind::MethodCallExpression, children)
        }
        _ => cond,
    })
}

/// Pattern variable for a type name: `Widget` → `widget`.
pub fn pattern_variable(type_name: &str) -> String {
    let mut c = type_name.chars();
    let first = c.next().map(|f| f.to_lowercase().collect::<String>()).unwrap_or_default();
    let v = first + c.as_str();
    if crate::minilang::KEYWORDS.contains(&v.as_str()) || v == type_name {
        format!("a{type_name}")
    } else {
        v
    }
}

fn cast_paren_of(n: &AstNode, ty: &str, subject: &str) -> bool {
    is_paren(n)
        && n.children[0].kind == NodeKind::CastExpression
        && n.children[0].children[0].token() == Some(ty)
        && n.children[0].children[1].token() == Some(subject)
}

fn replace_matching(node: &mut AstNode, pred: &dyn Fn(&AstNode) -> bool, with: &AstNode) -> usize {
    if pred(node) {
        let idx = node.sibling_index;
        *node = with.clone();
        node.sibling_index = idx;
        return 1;
    }
    node.children.iter_mut().map(|c| replace_matching(c, pred, with)).sum()
}

/// Applies one of the 10 analyzer transformations.
pub fn apply_analyzer(tag: &str, ast: &AstNode, rng: &mut impl Rng) -> Option<AstNode> {
    match tag {
        "RCS1001" => {
            let sites = ast.find_paths(&|n| {
                n.kind == NodeKind::IfCondition && n.children.len() == 2 && n.children[1].kind != NodeKind::Block
            });
            first_valid(ast, sites, rng, |ast, site, _| {
                let node = ast.at(site)?;
                let body = AstNode::branch(NodeKind::Block, vec![node.children[1].clone()]);
                let mut t = ast.clone();
                set_at(&mut t, site, with_children(node, vec![node.children[0].clone(), body]));
                Some(t)
            })
        }
        "RCS1032" => {
            let sites = ast.find_paths(&is_paren);
            first_valid(ast, sites, rng, |ast, site, _| {
                let inner = ast.at(site)?.children[0].clone();
                let mut t = ast.clone();
                set_at(&mut t, site, inner);
                Some(t)
            })
        }
        "RCS1049" => {
            let is_bool = |n: &AstNode| n.kind == NodeKind::Literal && matches!(n.token(), Some("true" | "false"));
            let sites = ast.find_paths(&|n| {
                is_binary(n, &[BinaryOp::Equals, BinaryOp::NotEquals])
                    && (is_bool(&n.children[0]) != is_bool(&n.children[1]))
            });
            first_valid(ast, sites, rng, |ast, site, _| {
                let node = ast.at(site)?;
                let lit_side = if is_bool(&node.children[1]) { 1 } else { 0 };
                let lit_true = node.children[lit_side].token() == Some("true");
                let subject = node.children[1 - lit_side].clone();
                let negate = (node.kind == NodeKind::BinaryExpression(BinaryOp::Equals)) != lit_true;
                let simplified = if negate {
                    AstNode::branch(
                        NodeKind::UnaryExpression(UnaryOp::Not),
                        vec![parenthesize_for(subject, UNARY_PRECEDENCE)],
                    )
                } else {
                    subject
                };
                let mut t = ast.clone();
                set_at(&mut t, site, simplified);
                Some(t)
            })
        }
        "RCS1085" => {
            let sites = ast.find_paths(&|n| n.kind == NodeKind::PropertyDeclaration);
            first_valid(ast, sites, rng, |ast, site, _| {
                let node = ast.at(site)?;
                let mut field: Option<String> = None;
                let mut same_field = |f: Option<&str>| -> bool {
                    match (f, &field) {
                        (Some(f), None) => {
                            field = Some(f.to_string());
                            true
                        }
                        (Some(f), Some(g)) => f == g,
                        _ => false,
                    }
                };
                let mut children = node.children[..2].to_vec();
                for acc in &node.children[2..] {
                    let [block] = acc.children.as_slice() else { return None };
                    let [stmt] = block.children.as_slice() else { return None };
                    let ok = match acc.kind {
                        NodeKind::GetAccessor => {
                            stmt.kind == NodeKind::ReturnStatement && same_field(stmt.children[0].token())
                        }
                        _ => {
                            stmt.kind == NodeKind::Assignment(crate::minilang::AssignOp::Assign)
                                && same_field(stmt.children[0].token())
                                && stmt.children[1].token() == Some("value")
                        }
                    };
                    if !ok {
                        return None;
                    }
                    let word = if acc.kind == NodeKind::GetAccessor { "get" } else { "set" };
                    children.push(AstNode::leaf(acc.kind, word));
                }
                let mut t = ast.clone();
                set_at(&mut t, site, with_children(node, children));
                Some(t)
            })
        }
        "RCS1123" => {
            let mut sites = Vec::new();
            for side in [0, 1] {
                sites.extend(child_paths(
                    ast,
                    &|n| match (n.kind, n.children.get(side).map(|c| c.kind)) {
                        (NodeKind::BinaryExpression(outer), Some(NodeKind::BinaryExpression(inner))) => {
                            precedence_pair(outer, inner)
                        }
                        _ => false,
                    },
                    &[side],
                ));
            }
            first_valid(ast, sites, rng, |ast, site, _| {
                let inner = ast.at(site)?.clone();
                let mut t = ast.clone();
                set_at(&mut t, site, AstNode::branch(NodeKind::ParenthesizedExpression, vec![inner]));
                Some(t)
            })
        }
        "RCS1124" => {
            let sites = ast.find_paths(&|n| {
                n.kind == NodeKind::Block
                    && n.children.len() == 2
                    && n.children[0].kind == NodeKind::VariableDeclaration
                    && n.children[0].children.len() == 3
            });
            first_valid(ast, sites, rng, |ast, site, _| {
                let node = ast.at(site)?;
                let decl = &node.children[0];
                let name = decl.children[1].token()?;
                let init = decl.children[2].clone();
                let use_stmt = &node.children[1];
                if count_refs(use_stmt, name) != 1 || count_refs(&init, name) != 0 {
                    return None;
                }
                let inlined = |value: AstNode| {
                    let mut s = use_stmt.clone();
                    replace_matching(&mut s, &|n| n.kind == NodeKind::NameExpression && n.token() == Some(name), &value);
                    let mut t = ast.clone();
                    set_at(&mut t, site, s);
                    t
                };
                let plain = inlined(init.clone());
                if reparses(&plain) {
                    Some(plain)
                } else {
                    Some(inlined(AstNode::branch(NodeKind::ParenthesizedExpression, vec![init])))
                }
            })
        }
        "RCS1146" => {
            let null_check = |n: &AstNode| -> Option<String> {
                if is_binary(n, &[BinaryOp::NotEquals]) && is_name(&n.children[0]) && is_null(&n.children[1]) {
                    n.children[0].token().map(String::from)
                } else {
                    None
                }
            };
            let mut sites = ast.find_paths(&|n| {
                n.kind == NodeKind::IfCondition && n.children.len() == 2 && null_check(&n.children[0]).is_some()
            });
            sites.extend(ast.find_paths(&|n| is_binary(n, &[BinaryOp::And]) && null_check(&n.children[0]).is_some()));
            first_valid(ast, sites, rng, |ast, site, _| {
                let node = ast.at(site)?;
                let receiver = null_check(&node.children[0])?;
                let converted = to_conditional(&node.children[1], &receiver)?;
                let replacement = if node.kind == NodeKind::IfCondition {
                    if !is_call(&converted) {
                        return None;
                    }
                    converted
                } else {
                    AstNode::branch(
                        NodeKind::BinaryExpression(BinaryOp::Equals),
                        vec![converted, AstNode::literal("true")],
                    )
                };
                let mut t = ast.clone();
                set_at(&mut t, site, replacement);
                Some(t)
            })
        }
        "RCS1163" | "RCS1168" => {
            let unused = tag == "RCS1163";
            let mut sites = Vec::new();
            for lambda in ast.find_paths(&|n| n.kind == NodeKind::LambdaExpression) {
                let node = ast.at(&lambda).unwrap();
                for (i, param) in node.children[0].children.iter().enumerate() {
                    let name = param.token().unwrap_or_default();
                    let refs = count_refs(&node.children[1], name);
                    if name != "_" && (refs == 0) == unused {
                        let mut s = lambda.clone();
                        s.extend([0, i]);
                        sites.push(s);
                    }
                }
            }
            first_valid(ast, sites, rng, |ast, site, rng| {
                let lambda_path = &site[..site.len() - 2];
                let lambda = ast.at(lambda_path)?;
                let old = ast.at(site)?.token()?;
                let new = if unused {
                    "_".to_string()
                } else {
                    let present = tokens_of(lambda);
                    let options: Vec<&&str> = BASE_NAMES.iter().filter(|b| !present.contains(b)).collect();
                    options.choose(rng)?.to_string()
                };
                let mut renamed = lambda.clone();
                let i = *site.last().unwrap();
                renamed.children[0].children[i].terminal_token = Some(new.clone());
                rename_refs(&mut renamed.children[1], old, &new);
                let mut t = ast.clone();
                set_at(&mut t, lambda_path, renamed);
                Some(t)
            })
        }
        "RCS1220" => {
            let sites = ast.find_paths(&|n| n.kind == NodeKind::IfCondition);
            first_valid(ast, sites, rng, |ast, site, rng| {
                let node = ast.at(site)?;
                let is_checks = node.find_paths(&|n| {
                    is_binary(n, &[BinaryOp::Is]) && is_name(&n.children[0]) && is_name(&n.children[1])
                });
                let check = is_checks.choose(rng)?;
                let is_node = node.at(check)?;
                let subject = is_node.children[0].token()?.to_string();
                let ty = is_node.children[1].token()?.to_string();
                let v = pattern_variable(&ty);
                if tokens_of(node).contains(&v.as_str()) {
                    return None;
                }
                let mut n2 = node.clone();
                let pattern = AstNode::branch(
                    NodeKind::PatternMatch,
                    vec![AstNode::name(subject.clone()), AstNode::name(ty.clone()), AstNode::name(v.clone())],
                );
                set_at(&mut n2, check, pattern);
                let replaced = replace_matching(&mut n2, &|n| cast_paren_of(n, &ty, &subject), &AstNode::name(v));
                if replaced == 0 {
                    return None;
                }
                let mut t = ast.clone();
                set_at(&mut t, site, n2);
                Some(t)
            })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run_analyzer(tag: &str, src: &str) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        pretty_print(&apply_analyzer(tag, &parse_source(src).unwrap(), &mut rng).unwrap_or_else(|| panic!("{tag} on {src}")))
    }

    fn run_sstub(label: &str, src: &str) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = NamePool::full();
        pretty_print(&apply_sstub(label, &parse_source(src).unwrap(), &p, &mut rng).unwrap())
    }

    #[test]
    fn analyzer_examples() {
        assert_eq!(run_analyzer("RCS1049", "if (var1 == false)"), "if (!var1)");
        assert_eq!(run_analyzer("RCS1049", "return a.b() != false;"), "return a.b();");
        assert_eq!(run_analyzer("RCS1032", "((x))"), "(x);");
        assert_eq!(run_analyzer("RCS1001", "if (a) b();"), "if (a) { b(); }");
        assert_eq!(
            run_analyzer("RCS1085", "int Count { get { return _count; } set { _count = value; } }"),
            "int Count { get; set; }"
        );
        assert_eq!(run_analyzer("RCS1123", "x = a + b * c"), "x = a + (b * c);");
        assert_eq!(run_analyzer("RCS1124", "{ var r = f(a); return r; }"), "return f(a);");
        assert_eq!(run_analyzer("RCS1124", "{ int r = a + b; x = r * 2; }"), "x = (a + b) * 2;");
        assert_eq!(run_analyzer("RCS1146", "if (a != null) a.b(c);"), "a?.b(c);");
        assert_eq!(run_analyzer("RCS1146", "if (a != null && a.ok())"), "if (a?.ok() == true)");
        assert_eq!(run_analyzer("RCS1163", "f((x, i) => x.g())"), "f((x, _) => x.g());");
        assert_eq!(
            run_analyzer("RCS1220", "if (o is Widget) ((Widget)o).draw();"),
            "if (o is Widget widget) widget.draw();"
        );
        let renamed = run_analyzer("RCS1168", "f((v) => v.g(v.v))");
        let base = renamed.trim_start_matches("f((").split(')').next().unwrap().to_string();
        assert!(BASE_NAMES.contains(&base.as_str()));
        assert_eq!(renamed, format!("f(({base}) => {base}.g({base}.v));"));
    }

    #[test]
    fn analyzers_without_sites_return_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ast = parse_source("f(x)").unwrap();
        for tag in crate::data::RCS_LABELS {
            assert!(apply_analyzer(tag, &ast, &mut rng).is_none(), "{tag}");
        }
        // required parentheses are not redundant
        let ast = parse_source("(a + b) * c").unwrap();
        assert!(apply_analyzer("RCS1032", &ast, &mut rng).is_none());
    }

    #[test]
    fn sstub_examples() {
        assert_eq!(
            run_sstub("swap arguments", "waitForJobExecutor(3000, 500)"),
            "waitForJobExecutor(500, 3000);"
        );
        assert_eq!(run_sstub("swap boolean literal", "f(true)"), "f(false);");
        assert_eq!(run_sstub("more specific if", "if (x)").split(" && ").count(), 2);
        assert_eq!(run_sstub("overload method deleted args", "f(a, b)").matches(',').count(), 0);
        let changed = run_sstub("change operator", "x = a + b");
        assert!(["-", "*", "/", "%"].iter().any(|op| changed == format!("x = a {op} b;")));
    }

    #[test]
    fn precedence_safe_operator_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = NamePool::full();
        let ast = parse_source("x = a * b + c").unwrap();
        for _ in 0..50 {
            let t = apply_sstub("change operator", &ast, &p, &mut rng).unwrap();
            assert!(reparses(&t));
        }
    }
}
