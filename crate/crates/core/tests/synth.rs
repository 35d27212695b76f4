//! Synthetic edits checked against an AST-diff classifier written
//! independently of the generators.

use editvec::data::*;
use editvec::minilang::{parse_source, AstNode, BinaryOp, NodeKind, UnaryOp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Strips sibling indices so subtrees compare by content only.
fn norm(n: &AstNode) -> AstNode {
    let mut c = n.clone();
    c.sibling_index = 0;
    c.children = n.children.iter().map(norm).collect();
    c
}

fn eq(a: &AstNode, b: &AstNode) -> bool {
    norm(a) == norm(b)
}

/// Descends while exactly one child differs; returns the path to the
/// smallest differing pair.
fn diff_point<'a>(mut o: &'a AstNode, mut n: &'a AstNode) -> (Vec<usize>, &'a AstNode, &'a AstNode) {
    let mut path = Vec::new();
    loop {
        if o.kind != n.kind || o.children.len() != n.children.len() || o.is_leaf() {
            return (path, o, n);
        }
        let differing: Vec<usize> = (0..o.children.len()).filter(|&i| !eq(&o.children[i], &n.children[i])).collect();
        if differing.len() != 1 {
            return (path, o, n);
        }
        let i = differing[0];
        path.push(i);
        o = &o.children[i];
        n = &n.children[i];
    }
}

fn tok(n: &AstNode) -> &str {
    n.token().unwrap_or("")
}

fn is_bool(n: &AstNode) -> bool {
    n.kind == NodeKind::Literal && matches!(tok(n), "true" | "false")
}

fn is_number(n: &AstNode) -> bool {
    n.kind == NodeKind::Literal && tok(n).starts_with(|c: char| c.is_ascii_digit())
}

fn leaves(n: &AstNode) -> Vec<String> {
    n.leaves().iter().map(|l| tok(l).to_string()).collect()
}

fn op_family(op: BinaryOp) -> u8 {
    use BinaryOp::*;
    match op {
        Plus | Minus | Times | Divide | Remainder => 0,
        Less | LessEquals | Greater | GreaterEquals | Equals | NotEquals => 1,
        And | Or => 2,
        _ => 3,
    }
}

fn classify_sstub(old: &AstNode, new: &AstNode) -> Option<&'static str> {
    let (path, o, n) = diff_point(old, new);
    let parent = |up: usize| -> Option<(&AstNode, usize)> {
        if path.len() < up {
            return None;
        }
        let p = old.at(&path[..path.len() - up])?;
        Some((p, path[path.len() - up]))
    };
    if o.is_leaf() && n.is_leaf() {
        if is_bool(o) && is_bool(n) {
            return Some("swap boolean literal");
        }
        if is_number(o) && is_number(n) {
            return Some("change numeral");
        }
        if o.kind != NodeKind::NameExpression || n.kind != NodeKind::NameExpression {
            return None;
        }
        let (p1, i1) = parent(1)?;
        let grand = parent(2);
        let in_callee = |g: Option<(&AstNode, usize)>| {
            g.is_some_and(|(g, gi)| g.kind == NodeKind::MethodCallExpression && gi == 0)
        };
        return match p1.kind {
            NodeKind::MethodCallExpression if i1 == 0 => Some("different method same args"),
            NodeKind::MemberAccess | NodeKind::ConditionalAccess if i1 == 1 && in_callee(grand) => {
                Some("different method same args")
            }
            NodeKind::MemberAccess if i1 == 0 && in_callee(grand) => Some("change caller in function call"),
            NodeKind::BinaryExpression(_) => Some("change operand"),
            _ => None,
        };
    }
    match (o.kind, n.kind) {
        (NodeKind::BinaryExpression(a), NodeKind::BinaryExpression(b))
            if a != b
                && op_family(a) == op_family(b)
                && leaves(o) == leaves(n) =>
        {
            return Some("change operator");
        }
        (NodeKind::MethodCallExpression, NodeKind::MethodCallExpression) => {
            let (oc, nc) = (&o.children, &n.children);
            if !eq(&oc[0], &nc[0]) {
                return None;
            }
            if oc.len() == nc.len() {
                let d: Vec<usize> = (1..oc.len()).filter(|&i| !eq(&oc[i], &nc[i])).collect();
                if d.len() == 2 && eq(&oc[d[0]], &nc[d[1]]) && eq(&oc[d[1]], &nc[d[0]]) {
                    return Some("swap arguments");
                }
                return None;
            }
            let (long, short, label) = if oc.len() > nc.len() {
                (oc, nc, "overload method deleted args")
            } else {
                (nc, oc, "overload method more args")
            };
            if long.len() != short.len() + 1 {
                return None;
            }
            let removable = (1..long.len()).any(|k| {
                let mut l = long.clone();
                l.remove(k);
                l.iter().zip(short).all(|(a, b)| eq(a, b))
            });
            return removable.then_some(label);
        }
        _ => {}
    }
    if let NodeKind::BinaryExpression(op @ (BinaryOp::Or | BinaryOp::And)) = n.kind {
        let (p1, i1) = parent(1)?;
        if p1.kind == NodeKind::IfCondition && i1 == 0 && eq(&n.children[0], o) {
            return Some(if op == BinaryOp::Or { "less specific if" } else { "more specific if" });
        }
    }
    None
}

fn strip_paren(n: &AstNode) -> &AstNode {
    if n.kind == NodeKind::ParenthesizedExpression { &n.children[0] } else { n }
}

fn classify_analyzer(old: &AstNode, new: &AstNode) -> Option<&'static str> {
    if old.kind == NodeKind::PropertyDeclaration && new.kind == NodeKind::PropertyDeclaration {
        let accessors_collapsed = old.children[2..].iter().all(|a| !a.is_leaf())
            && new.children[2..].iter().all(|a| a.is_leaf())
            && eq(&old.children[1], &new.children[1]);
        return accessors_collapsed.then_some("RCS1085");
    }
    let (path, o, n) = diff_point(old, new);
    let parent = || -> Option<(&AstNode, usize)> {
        let (last, rest) = path.split_last()?;
        Some((old.at(rest)?, *last))
    };
    // parentheses added or removed around an unchanged subtree
    if o.kind == NodeKind::ParenthesizedExpression && eq(&o.children[0], n) {
        return Some("RCS1032");
    }
    if n.kind == NodeKind::ParenthesizedExpression
        && eq(&n.children[0], o)
        && matches!(o.kind, NodeKind::BinaryExpression(_))
        && parent().is_some_and(|(p, _)| matches!(p.kind, NodeKind::BinaryExpression(_)))
    {
        return Some("RCS1123");
    }
    if n.kind == NodeKind::Block && n.children.len() == 1 && eq(&n.children[0], o) {
        return parent().filter(|(p, i)| p.kind == NodeKind::IfCondition && *i == 1).map(|_| "RCS1001");
    }
    if let NodeKind::BinaryExpression(BinaryOp::Equals | BinaryOp::NotEquals) = o.kind {
        if is_bool(&o.children[0]) || is_bool(&o.children[1]) {
            let subject = if is_bool(&o.children[1]) { &o.children[0] } else { &o.children[1] };
            let plain = eq(n, subject);
            let negated = n.kind == NodeKind::UnaryExpression(UnaryOp::Not) && eq(strip_paren(&n.children[0]), subject);
            if plain || negated {
                return Some("RCS1049");
            }
        }
    }
    if o.kind == NodeKind::Block && o.children.len() == 2 && o.children[0].kind == NodeKind::VariableDeclaration {
        let decl = &o.children[0];
        let (name, init) = (tok(&decl.children[1]), &decl.children[2]);
        let stmt = &o.children[1];
        let uses: Vec<Vec<usize>> = stmt
            .find_paths(&|x| x.kind == NodeKind::NameExpression && tok(x) == name)
            .into_iter()
            .filter(|p| {
                let (last, rest) = p.split_last().unwrap();
                !(*last == 1 && stmt.at(rest).is_some_and(|q| q.kind == NodeKind::MemberAccess))
            })
            .collect();
        if uses.len() != 1 {
            return None;
        }
        let inlined = [init.clone(), AstNode::branch(NodeKind::ParenthesizedExpression, vec![init.clone()])]
            .into_iter()
            .any(|replacement| {
                let mut t = stmt.clone();
                if uses[0].is_empty() {
                    t = replacement;
                } else {
                    *t.at_mut(&uses[0]).unwrap() = replacement;
                }
                eq(&t, n)
            });
        return inlined.then_some("RCS1124");
    }
    let has = |t: &AstNode, pred: &dyn Fn(&AstNode) -> bool| !t.find_paths(pred).is_empty();
    let conditional = |t: &AstNode| has(t, &|x| x.kind == NodeKind::ConditionalAccess);
    let null_check = |t: &AstNode| has(t, &|x| x.kind == NodeKind::Literal && tok(x) == "null");
    if conditional(n) && !conditional(o) && null_check(o) && !null_check(n) {
        return Some("RCS1146");
    }
    let pattern = |t: &AstNode| has(t, &|x| x.kind == NodeKind::PatternMatch);
    let cast = |t: &AstNode| has(t, &|x| x.kind == NodeKind::CastExpression);
    if pattern(n) && !pattern(o) && cast(o) && !cast(n) {
        return Some("RCS1220");
    }
    // lambda parameter renames
    let lambda_at = |t: &AstNode| t.find_paths(&|x| x.kind == NodeKind::LambdaExpression);
    if lambda_at(old).len() == 1 && old.same_shape(new) {
        let (lo, ln) = (old.at(&lambda_at(old)[0])?, new.at(&lambda_at(new)[0])?);
        let (po, pn) = (leaves(&lo.children[0]), leaves(&ln.children[0]));
        let changed: Vec<usize> = (0..po.len()).filter(|&i| po[i] != pn[i]).collect();
        if changed.len() != 1 || leaves(old).len() != leaves(new).len() {
            return None;
        }
        let (from, to) = (&po[changed[0]], &pn[changed[0]]);
        let body_o = leaves(&lo.children[1]);
        let body_n = leaves(&ln.children[1]);
        let used = body_o.contains(from);
        if to == "_" && !used && body_o == body_n {
            return Some("RCS1163");
        }
        if to != "_" && used && body_n.contains(to) && !body_n.contains(from) {
            return Some("RCS1168");
        }
    }
    None
}

fn parse_pair(e: &CodeEdit) -> (AstNode, AstNode) {
    (parse_source(&e.old_source).unwrap(), parse_source(&e.new_source).unwrap())
}

#[test]
fn every_template_draw_matches_the_diff_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for label in SSTUB_LABELS {
        for _ in 0..1000 {
            let e = synth_sstub(label, &mut rng, SynthOptions::default());
            let (o, n) = parse_pair(&e);
            assert_eq!(classify_sstub(&o, &n), Some(label), "{} ==> {}", e.old_source, e.new_source);
        }
    }
}

#[test]
fn every_analyzer_draw_matches_the_diff_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    for tag in RCS_LABELS {
        for _ in 0..1000 {
            let e = synth_transformation(tag, &mut rng, SynthOptions::default());
            let (o, n) = parse_pair(&e);
            assert_eq!(classify_analyzer(&o, &n), Some(tag), "{} ==> {}", e.old_source, e.new_source);
        }
    }
}

#[test]
fn per_class_identifier_scope_also_matches() {
    let opts = SynthOptions { scope: IdentifierScope::PerClass };
    let d = make_synthetic_corpus(Task::BugFix, 30, 9, opts);
    for e in &d.edits {
        let (o, n) = parse_pair(e);
        assert_eq!(classify_sstub(&o, &n), Some(e.label.as_str()));
    }
}

#[test]
fn corpus_size_balance_and_determinism() {
    let a = make_synthetic_corpus(Task::BugFix, 10, 42, SynthOptions::default());
    assert_eq!(a.len(), 110);
    assert_eq!(a.num_classes(), 11);
    let b = make_synthetic_corpus(Task::BugFix, 10, 42, SynthOptions::default());
    assert_eq!(to_jsonl(&a.edits), to_jsonl(&b.edits));
    let c = make_synthetic_corpus(Task::BugFix, 10, 43, SynthOptions::default());
    assert_ne!(to_jsonl(&a.edits), to_jsonl(&c.edits));
    assert!(make_synthetic_corpus(Task::CodeTransformation, 0, 1, SynthOptions::default()).is_empty());
    let t = make_synthetic_corpus(Task::CodeTransformation, 50, 1, SynthOptions::default());
    let pairs: std::collections::HashSet<_> = t.edits.iter().map(|e| (&e.old_source, &e.new_source)).collect();
    assert_eq!(pairs.len(), 500);
}

#[test]
fn synthetic_corpora_survive_filtering() {
    for task in [Task::BugFix, Task::CodeTransformation] {
        let d = make_synthetic_corpus(task, 100, 7, SynthOptions::default());
        let (kept, report) = filter_pipeline(&d, 40);
        assert_eq!(kept.len(), d.len(), "{task}: {report:?}");
        assert!(report.dropped.is_empty());
    }
}

#[test]
fn documented_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let p = NamePool::full();
    let host = parse_source("waitForJobExecutor(3000, 500)").unwrap();
    let swapped = apply_sstub("swap arguments", &host, &p, &mut rng).unwrap();
    assert_eq!(swapped, parse_source("waitForJobExecutor(500, 3000)").unwrap());
    let host = parse_source("if (var1 == false)").unwrap();
    let simplified = apply_analyzer("RCS1049", &host, &mut rng).unwrap();
    assert_eq!(simplified, parse_source("if (!var1)").unwrap());
}
