//! Random snippet builders shared by the edit generators.

use super::names::{NamePool, FLOATS, INTS, STRINGS};
use crate::minilang::random::binary;
use crate::minilang::{AssignOp, AstNode, BinaryOp, NodeKind, UnaryOp};
use rand::seq::IndexedRandom;
use rand::Rng;

pub const ARITHMETIC: [BinaryOp; 5] = [
    BinaryOp::Plus,
    BinaryOp::Minus,
    BinaryOp::Times,
    BinaryOp::Divide,
    BinaryOp::Remainder,
];
pub const RELATIONAL: [BinaryOp; 6] = [
    BinaryOp::Less,
    BinaryOp::LessEquals,
    BinaryOp::Greater,
    BinaryOp::GreaterEquals,
    BinaryOp::Equals,
    BinaryOp::NotEquals,
];

pub fn pick(rng: &mut impl Rng, pool: &[&str]) -> String {
    pool.choose(rng).unwrap().to_string()
}

pub fn var(p: &NamePool, rng: &mut impl Rng) -> AstNode {
    AstNode::name(p.variable(rng))
}

pub fn int_literal(rng: &mut impl Rng) -> AstNode {
    AstNode::literal(pick(rng, &INTS))
}

pub fn bool_literal(rng: &mut impl Rng) -> AstNode {
    AstNode::literal(if rng.random_bool(0.5) { "true" } else { "false" })
}

pub fn literal(rng: &mut impl Rng) -> AstNode {
    match rng.random_range(0..20) {
        0..=8 => int_literal(rng),
        9..=11 => AstNode::literal(pick(rng, &FLOATS)),
        12..=17 => AstNode::literal(pick(rng, &STRINGS)),
        _ => bool_literal(rng),
    }
}

pub fn member(p: &NamePool, rng: &mut impl Rng) -> AstNode {
    AstNode::branch(NodeKind::MemberAccess, vec![var(p, rng), var(p, rng)])
}

pub fn argument(p: &NamePool, rng: &mut impl Rng) -> AstNode {
    match rng.random_range(0..10) {
        0..=4 => var(p, rng),
        5..=8 => literal(rng),
        _ => member(p, rng),
    }
}

pub fn call_with(callee: AstNode, args: Vec<AstNode>) -> AstNode {
    let mut children = vec![callee];
    children.extend(args);
    AstNode::branch(NodeKind::MethodCallExpression, children)
}

pub fn callee(p: &NamePool, rng: &mut impl Rng, receiver: bool) -> AstNode {
    let m = AstNode::name(p.method(rng));
    if receiver {
        AstNode::branch(NodeKind::MemberAccess, vec![var(p, rng), m])
    } else {
        m
    }
}

pub fn call(p: &NamePool, rng: &mut impl Rng, nargs: usize, receiver: bool) -> AstNode {
    let c = callee(p, rng, receiver);
    let args = (0..nargs).map(|_| argument(p, rng)).collect();
    call_with(c, args)
}

pub fn random_call(p: &NamePool, rng: &mut impl Rng, min_args: usize, max_args: usize) -> AstNode {
    let n = rng.random_range(min_args..=max_args);
    let receiver = rng.random_bool(0.5);
    call(p, rng, n, receiver)
}

/// A small operand: a name, an int, or a call without arguments.
pub fn operand(p: &NamePool, rng: &mut impl Rng) -> AstNode {
    match rng.random_range(0..10) {
        0..=5 => var(p, rng),
        6..=8 => int_literal(rng),
        _ => random_call(p, rng, 0, 0),
    }
}

/// A boolean-valued expression suitable for an `if`.
pub fn condition(p: &NamePool, rng: &mut impl Rng) -> AstNode {
    match rng.random_range(0..20) {
        0..=5 => {
            let op = *RELATIONAL.choose(rng).unwrap();
            let r = if rng.random_bool(0.5) { int_literal(rng) } else { var(p, rng) };
            binary(op, var(p, rng), r)
        }
        6..=9 => random_call(p, rng, 0, 1),
        10..=12 => var(p, rng),
        13..=14 => {
            let inner = if rng.random_bool(0.5) { var(p, rng) } else { random_call(p, rng, 0, 0) };
            AstNode::branch(NodeKind::UnaryExpression(UnaryOp::Not), vec![inner])
        }
        15..=17 => {
            let op = if rng.random_bool(0.7) { BinaryOp::NotEquals } else { BinaryOp::Equals };
            binary(op, var(p, rng), AstNode::literal("null"))
        }
        _ => member(p, rng),
    }
}

pub fn type_name(p: &NamePool, rng: &mut impl Rng) -> AstNode {
    if rng.random_bool(0.5) {
        AstNode::name(pick(rng, &["var", "int", "string", "bool", "double"]))
    } else {
        AstNode::name(p.type_name(rng))
    }
}

pub fn assign(target: AstNode, value: AstNode) -> AstNode {
    AstNode::branch(NodeKind::Assignment(AssignOp::Assign), vec![target, value])
}

/// A simple statement usable as an `if` body.
pub fn simple_statement(p: &NamePool, rng: &mut impl Rng) -> AstNode {
    match rng.random_range(0..10) {
        0..=5 => random_call(p, rng, 0, 1),
        6..=7 => assign(var(p, rng), operand(p, rng)),
        _ => AstNode::branch(NodeKind::ReturnStatement, vec![var(p, rng)]),
    }
}

/// Places an expression in a random statement context.
pub fn embed(core: AstNode, p: &NamePool, rng: &mut impl Rng) -> AstNode {
    let standalone = matches!(
        core.kind,
        NodeKind::MethodCallExpression | NodeKind::Assignment(_)
    );
    loop {
        match rng.random_range(0..20) {
            0..=6 if standalone => return core,
            7..=10 => return assign(var(p, rng), core),
            11..=13 => {
                return AstNode::branch(
                    NodeKind::VariableDeclaration,
                    vec![type_name(p, rng), var(p, rng), core],
                )
            }
            14..=16 => return AstNode::branch(NodeKind::ReturnStatement, vec![core]),
            17..=18 => return AstNode::branch(NodeKind::IfCondition, vec![core]),
            19 => {
                let receiver = rng.random_bool(0.5);
                return call_with(callee(p, rng, receiver), vec![core]);
            }
            _ => {}
        }
    }
}
