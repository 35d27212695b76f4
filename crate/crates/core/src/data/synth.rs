use super::build::*;
use super::names::{IdentifierScope, NamePool};
use super::rewrite::{apply_analyzer, apply_sstub, reparses};
use super::{CodeEdit, Dataset, Provenance, Task};
use crate::minilang::random::binary;
use crate::minilang::{pretty_print, tokenize, AssignOp, AstNode, BinaryOp, NodeKind};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Terminals allowed per side: at least one pair, at most 36 path-contexts.
pub const MIN_TERMINALS: usize = 2;
pub const MAX_TERMINALS: usize = 9;
const MAX_TOKENS: usize = 64;
const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SynthOptions {
    pub scope: IdentifierScope,
}

fn host_sstub(label: &str, p: &NamePool, rng: &mut impl Rng) -> AstNode {
    match label {
        "change caller in function call" => {
            let n = rng.random_range(0..=2);
            embed(call(p, rng, n, true), p, rng)
        }
        "change numeral" => match rng.random_range(0..10) {
            0..=3 => {
                let mut c = random_call(p, rng, 0, 2);
                let at = rng.random_range(1..=c.children.len());
                c.children.insert(at, int_literal(rng));
                c.renumber();
                embed(c, p, rng)
            }
            4..=7 => {
                let op = *ARITHMETIC.iter().chain(&RELATIONAL).collect::<Vec<_>>().choose(rng).unwrap();
                let lhs = operand(p, rng);
                embed(binary(*op, lhs, int_literal(rng)), p, rng)
            }
            _ => assign(var(p, rng), int_literal(rng)),
        },
        "change operand" | "change operator" => {
            let op = *ARITHMETIC.iter().chain(&RELATIONAL).collect::<Vec<_>>().choose(rng).unwrap();
            let lhs = var(p, rng);
            let rhs = if rng.random_bool(0.6) { var(p, rng) } else { operand(p, rng) };
            let (l, r) = if rng.random_bool(0.8) { (lhs, rhs) } else { (rhs, lhs) };
            embed(binary(*op, l, r), p, rng)
        }
        "different method same args" => {
            let c = random_call(p, rng, 0, 2);
            embed(c, p, rng)
        }
        "less specific if" | "more specific if" => {
            let mut children = vec![condition(p, rng)];
            if rng.random_bool(0.25) {
                children.push(simple_statement(p, rng));
            }
            AstNode::branch(NodeKind::IfCondition, children)
        }
        "overload method deleted args" => {
            let c = random_call(p, rng, 1, 3);
            embed(c, p, rng)
        }
        "overload method more args" => {
            let c = random_call(p, rng, 0, 2);
            embed(c, p, rng)
        }
        "swap arguments" => {
            let c = random_call(p, rng, 2, 3);
            embed(c, p, rng)
        }
        "swap boolean literal" => match rng.random_range(0..20) {
            0..=9 => {
                let mut c = random_call(p, rng, 0, 2);
                let at = rng.random_range(1..=c.children.len());
                c.children.insert(at, bool_literal(rng));
                c.renumber();
                c
            }
            10..=14 => assign(var(p, rng), bool_literal(rng)),
            15..=17 => {
                let op = if rng.random_bool(0.5) { BinaryOp::Equals } else { BinaryOp::NotEquals };
                let cond = binary(op, var(p, rng), bool_literal(rng));
                AstNode::branch(NodeKind::IfCondition, vec![cond])
            }
            _ => AstNode::branch(
                NodeKind::VariableDeclaration,
                vec![AstNode::name("bool"), var(p, rng), bool_literal(rng)],
            ),
        },
        other => panic!("unknown bug-fix template {other:?}"),
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().collect::<String>() + c.as_str()).unwrap_or_default()
}

fn lambda(params: Vec<String>, body: AstNode) -> AstNode {
    let params = AstNode::branch(NodeKind::ArgumentList, params.into_iter().map(AstNode::name).collect());
    AstNode::branch(NodeKind::LambdaExpression, vec![params, body])
}

/// A lambda body that refers to exactly the given parameters.
fn lambda_body(used: &[String], p: &NamePool, rng: &mut impl Rng) -> AstNode {
    let m = AstNode::name(p.method(rng));
    match used {
        [] => call_with(m, vec![]),
        [a] => match rng.random_range(0..3) {
            0 => call_with(AstNode::branch(NodeKind::MemberAccess, vec![AstNode::name(a.as_str()), m]), vec![]),
            1 => call_with(m, vec![AstNode::name(a.as_str())]),
            _ => binary(BinaryOp::Greater, AstNode::name(a.as_str()), int_literal(rng)),
        },
        [a, b, ..] => call_with(
            AstNode::branch(NodeKind::MemberAccess, vec![AstNode::name(a.as_str()), m]),
            vec![AstNode::name(b.as_str())],
        ),
    }
}

fn distinct_vars(p: &NamePool, rng: &mut impl Rng, n: usize) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    while out.len() < n {
        let avoid: Vec<&str> = out.iter().map(String::as_str).collect();
        out.push(p.variable_except(rng, &avoid).expect("pool has enough names"));
    }
    out
}

fn host_analyzer(tag: &str, p: &NamePool, rng: &mut impl Rng) -> AstNode {
    match tag {
        "RCS1001" => AstNode::branch(NodeKind::IfCondition, vec![condition(p, rng), simple_statement(p, rng)]),
        "RCS1032" => {
            let core = match rng.random_range(0..3) {
                0 => random_call(p, rng, 1, 2),
                1 => {
                    let op = *ARITHMETIC.choose(rng).unwrap();
                    binary(op, operand(p, rng), operand(p, rng))
                }
                _ => condition(p, rng),
            };
            let host = embed(core, p, rng);
            wrap_redundant(&host, rng).unwrap_or(host)
        }
        "RCS1049" => {
            let subject = match rng.random_range(0..3) {
                0 => var(p, rng),
                1 => random_call(p, rng, 0, 1),
                _ => member(p, rng),
            };
            let op = if rng.random_bool(0.6) { BinaryOp::Equals } else { BinaryOp::NotEquals };
            let (l, r) = if rng.random_bool(0.85) { (subject, bool_literal(rng)) } else { (bool_literal(rng), subject) };
            let cond = binary(op, l, r);
            match rng.random_range(0..10) {
                0..=5 => AstNode::branch(NodeKind::IfCondition, vec![cond]),
                6..=7 => AstNode::branch(NodeKind::ReturnStatement, vec![cond]),
                _ => assign(var(p, rng), cond),
            }
        }
        "RCS1085" => {
            let v = p.variable(rng);
            let field = AstNode::name(format!("_{v}"));
            let get = AstNode::branch(
                NodeKind::GetAccessor,
                vec![AstNode::branch(
                    NodeKind::Block,
                    vec![AstNode::branch(NodeKind::ReturnStatement, vec![field.clone()])],
                )],
            );
            let mut children = vec![type_name(p, rng), AstNode::name(capitalize(&v)), get];
            if rng.random_bool(0.7) {
                let set_body = AstNode::branch(
                    NodeKind::Block,
                    vec![AstNode::branch(
                        NodeKind::Assignment(AssignOp::Assign),
                        vec![field, AstNode::name("value")],
                    )],
                );
                children.push(AstNode::branch(NodeKind::SetAccessor, vec![set_body]));
            }
            if children[0].token() == Some("var") {
                children[0] = AstNode::name("int");
            }
            AstNode::branch(NodeKind::PropertyDeclaration, children)
        }
        "RCS1123" => {
            use BinaryOp::*;
            let (outer, inner) = *[
                (Or, And),
                (Plus, Times),
                (Minus, Times),
                (Plus, Divide),
                (Minus, Remainder),
                (BitOr, BitAnd),
                (BitOr, Xor),
                (Xor, BitAnd),
                (LeftShift, Plus),
                (RightShift, Minus),
            ]
            .choose(rng)
            .unwrap();
            let leaf = |rng: &mut _| {
                if matches!(outer, Or) { condition_leaf(p, rng) } else { operand(p, rng) }
            };
            let (a, b, c) = (leaf(rng), leaf(rng), leaf(rng));
            let expr = if rng.random_bool(0.5) {
                binary(outer, a, binary(inner, b, c))
            } else {
                binary(outer, binary(inner, a, b), c)
            };
            if matches!(outer, Or) {
                AstNode::branch(NodeKind::IfCondition, vec![expr])
            } else {
                embed(expr, p, rng)
            }
        }
        "RCS1124" => {
            let names = distinct_vars(p, rng, 2);
            let (x, target) = (&names[0], &names[1]);
            let init = match rng.random_range(0..3) {
                0 => random_call(p, rng, 0, 2),
                1 => {
                    let op = *ARITHMETIC.choose(rng).unwrap();
                    binary(op, operand(p, rng), operand(p, rng))
                }
                _ => member(p, rng),
            };
            let decl = AstNode::branch(
                NodeKind::VariableDeclaration,
                vec![type_name(p, rng), AstNode::name(x.as_str()), init],
            );
            let use_stmt = match rng.random_range(0..10) {
                0..=4 => AstNode::branch(NodeKind::ReturnStatement, vec![AstNode::name(x.as_str())]),
                5..=6 => assign(AstNode::name(target.as_str()), AstNode::name(x.as_str())),
                _ => {
                    let receiver = rng.random_bool(0.5);
                    call_with(callee(p, rng, receiver), vec![AstNode::name(x.as_str())])
                }
            };
            AstNode::branch(NodeKind::Block, vec![decl, use_stmt])
        }
        "RCS1146" => {
            let a = p.variable(rng);
            let check = binary(BinaryOp::NotEquals, AstNode::name(a.as_str()), AstNode::literal("null"));
            let access = AstNode::branch(NodeKind::MemberAccess, vec![AstNode::name(a.as_str()), AstNode::name(p.method(rng))]);
            if rng.random_bool(0.5) {
                let n = rng.random_range(0..=2);
                let args = (0..n).map(|_| argument(p, rng)).collect();
                AstNode::branch(NodeKind::IfCondition, vec![check, call_with(access, args)])
            } else {
                let rhs = if rng.random_bool(0.6) {
                    let n = rng.random_range(0..=1);
                    let args = (0..n).map(|_| argument(p, rng)).collect();
                    call_with(access, args)
                } else {
                    AstNode::branch(NodeKind::MemberAccess, vec![AstNode::name(a.as_str()), var(p, rng)])
                };
                AstNode::branch(NodeKind::IfCondition, vec![binary(BinaryOp::And, check, rhs)])
            }
        }
        "RCS1163" | "RCS1168" => {
            let n = rng.random_range(1..=2);
            let params = distinct_vars(p, rng, n);
            let used: Vec<String> = if tag == "RCS1163" {
                let keep = rng.random_range(0..n);
                params.iter().take(keep).cloned().collect::<Vec<_>>()
            } else {
                params.clone()
            };
            let body = lambda_body(&used, p, rng);
            let receiver = rng.random_bool(0.7);
            let c = call_with(callee(p, rng, receiver), vec![lambda(params, body)]);
            if rng.random_bool(0.3) { assign(var(p, rng), c) } else { c }
        }
        "RCS1220" => {
            let subject = p.variable(rng);
            let ty = p.type_name(rng);
            let is = binary(BinaryOp::Is, AstNode::name(subject.as_str()), AstNode::name(ty.as_str()));
            let cast = AstNode::branch(
                NodeKind::ParenthesizedExpression,
                vec![AstNode::branch(
                    NodeKind::CastExpression,
                    vec![AstNode::name(ty.as_str()), AstNode::name(subject.as_str())],
                )],
            );
            let m = AstNode::name(p.method(rng));
            let access = AstNode::branch(NodeKind::MemberAccess, vec![cast, m]);
            if rng.random_bool(0.6) {
                let n = rng.random_range(0..=1);
                let args = (0..n).map(|_| argument(p, rng)).collect();
                AstNode::branch(NodeKind::IfCondition, vec![is, call_with(access, args)])
            } else {
                let rhs = call_with(access, vec![]);
                AstNode::branch(NodeKind::IfCondition, vec![binary(BinaryOp::And, is, rhs)])
            }
        }
        other => panic!("unknown analyzer {other:?}"),
    }
}

fn condition_leaf(p: &NamePool, rng: &mut impl Rng) -> AstNode {
    if rng.random_bool(0.6) { var(p, rng) } else { random_call(p, rng, 0, 0) }
}

/// Wraps one expression of `host` in parentheses that do not change the
/// parse.
fn wrap_redundant(host: &AstNode, rng: &mut impl Rng) -> Option<AstNode> {
    let expression_slot = |parent: &AstNode, i: usize| -> bool {
        match parent.kind {
            NodeKind::MethodCallExpression => i >= 1,
            NodeKind::BinaryExpression(BinaryOp::Is) => i == 0,
            NodeKind::BinaryExpression(_) | NodeKind::ParenthesizedExpression | NodeKind::UnaryExpression(_) => true,
            NodeKind::Assignment(_) => i == 1,
            NodeKind::VariableDeclaration => i == 2,
            NodeKind::ReturnStatement | NodeKind::IfCondition => i == 0,
            NodeKind::MemberAccess => i == 0,
            _ => false,
        }
    };
    let mut slots = Vec::new();
    for parent in host.find_paths(&|n| !n.is_leaf()) {
        let node = host.at(&parent).unwrap();
        for i in 0..node.children.len() {
            if expression_slot(node, i) {
                let mut s = parent.clone();
                s.push(i);
                slots.push(s);
            }
        }
    }
    use rand::seq::SliceRandom;
    slots.shuffle(rng);
    slots.into_iter().find_map(|slot| {
        let mut t = host.clone();
        let target = t.at_mut(&slot).unwrap();
        let idx = target.sibling_index;
        let mut wrapped = AstNode::branch(NodeKind::ParenthesizedExpression, vec![target.clone()]);
        wrapped.sibling_index = idx;
        *target = wrapped;
        reparses(&t).then_some(t)
    })
}

/// Checks the per-side limits that keep every synthetic edit within the
/// filtering thresholds.
pub fn within_limits(ast: &AstNode, source: &str) -> bool {
    let terminals = ast.leaves().len();
    (MIN_TERMINALS..=MAX_TERMINALS).contains(&terminals)
        && tokenize(source).is_ok_and(|t| t.len() <= MAX_TOKENS)
}

fn accept(old: &AstNode, new: &AstNode) -> Option<(String, String)> {
    let (o, n) = (pretty_print(old), pretty_print(new));
    (o != n && reparses(old) && reparses(new) && within_limits(old, &o) && within_limits(new, &n)).then_some((o, n))
}

fn draw(
    task: Task,
    label: &str,
    p: &NamePool,
    rng: &mut impl Rng,
    reject: &mut dyn FnMut(&str, &str) -> bool,
) -> (String, String) {
    for _ in 0..MAX_ATTEMPTS {
        let (host, rewritten) = match task {
            Task::BugFix => {
                let host = host_sstub(label, p, rng);
                let new = apply_sstub(label, &host, p, rng);
                (host, new)
            }
            Task::CodeTransformation => {
                let host = host_analyzer(label, p, rng);
                let new = apply_analyzer(label, &host, rng);
                (host, new)
            }
        };
        if let Some((o, n)) = rewritten.and_then(|new| accept(&host, &new)) {
            if !reject(&o, &n) {
                return (o, n);
            }
        }
    }
    panic!("no acceptable {label:?} edit after {MAX_ATTEMPTS} attempts");
}

fn label_index(task: Task, label: &str) -> usize {
    task.labels()
        .iter()
        .position(|l| *l == label)
        .unwrap_or_else(|| panic!("{label:?} is not a {task} label"))
}

fn pool_for(task: Task, label: &str, opts: SynthOptions) -> NamePool {
    NamePool::for_class(opts.scope, label_index(task, label), task.labels().len())
}

/// One bug-fix edit for `template` with a fresh random host.
pub fn synth_sstub(template: &str, rng: &mut impl Rng, opts: SynthOptions) -> CodeEdit {
    let p = pool_for(Task::BugFix, template, opts);
    let (old, new) = draw(Task::BugFix, template, &p, rng, &mut |_, _| false);
    edit(String::new(), old, new, template, Task::BugFix, None)
}

/// One code-transformation edit for the analyzer `tag`.
pub fn synth_transformation(tag: &str, rng: &mut impl Rng, opts: SynthOptions) -> CodeEdit {
    let p = pool_for(Task::CodeTransformation, tag, opts);
    let (old, new) = draw(Task::CodeTransformation, tag, &p, rng, &mut |_, _| false);
    edit(String::new(), old, new, tag, Task::CodeTransformation, None)
}

fn edit(id: String, old: String, new: String, label: &str, task: Task, prov: Option<Provenance>) -> CodeEdit {
    CodeEdit {
        id,
        old_source: old,
        new_source: new,
        label: label.to_string(),
        task,
        provenance: prov,
    }
}

/// A balanced corpus with `per_class` distinct edits per label, fully
/// determined by `seed`.
pub fn make_synthetic_corpus(task: Task, per_class: usize, seed: u64, opts: SynthOptions) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut edits = Vec::with_capacity(per_class * task.labels().len());
    for label in task.labels() {
        let p = pool_for(task, label, opts);
        for _ in 0..per_class {
            let (old, new) = draw(task, label, &p, &mut rng, &mut |o, n| {
                seen.contains(&(o.to_string(), n.to_string()))
            });
            seen.insert((old.clone(), new.clone()));
            let id = format!("{}-{:05}", task.as_str(), edits.len() + 1);
            edits.push(edit(id, old, new, label, task, Some(Provenance::Synthetic(seed))));
        }
    }
    Dataset::new(task, edits)
}
