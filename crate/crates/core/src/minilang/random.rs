//! Random generation of parse-canonical syntax trees.
//!
//! Every tree produced here is one the parser could return, so
//! `parse(tokenize(pretty_print(t))) == t`.

use super::ast::{
    AssignOp, AstNode, BinaryOp, NodeKind, UnaryOp, PATTERN_PRECEDENCE, PRIMARY_PRECEDENCE,
    UNARY_PRECEDENCE,
};
use rand::seq::IndexedRandom;
use rand::Rng;

const DEFAULT_NAMES: &[&str] = &[
    "x", "y", "count", "index", "url", "baseURL", "message", "depth", "getValue", "setName",
    "parent", "node", "items", "result", "buffer", "_size", "maxLength", "isEnabled", "toString",
    "processURL", "HttpClient", "value2", "get_id2Name",
];
const TYPES: &[&str] = &["int", "string", "bool", "var", "Foo", "List", "object"];
const INTS: &[&str] = &["0", "1", "2", "42", "500", "3000", "0x1F", "10L"];
const FLOATS: &[&str] = &["0.5", "2.345", "1e-3", "3.0f"];
const STRINGS: &[&str] = &["\"\"", "\"a\"", "\"Alice\"", "\"hello world\""];

/// Precedence at which a node would be parsed as an operand.
pub fn precedence(node: &AstNode) -> u8 {
    match node.kind {
        NodeKind::BinaryExpression(op) => op.precedence(),
        NodeKind::PatternMatch => PATTERN_PRECEDENCE,
        NodeKind::UnaryExpression(_) | NodeKind::CastExpression => UNARY_PRECEDENCE,
        NodeKind::Assignment(_) | NodeKind::LambdaExpression => 0,
        _ => PRIMARY_PRECEDENCE,
    }
}

/// Wraps `node` in parentheses if it binds looser than `min_prec`.
pub fn parenthesize_for(node: AstNode, min_prec: u8) -> AstNode {
    if precedence(&node) < min_prec {
        AstNode::branch(NodeKind::ParenthesizedExpression, vec![node])
    } else {
        node
    }
}

/// Builds a binary node, inserting the parentheses its operands need.
pub fn binary(op: BinaryOp, left: AstNode, right: AstNode) -> AstNode {
    let p = op.precedence();
    AstNode::branch(
        NodeKind::BinaryExpression(op),
        vec![parenthesize_for(left, p), parenthesize_for(right, p + 1)],
    )
}

pub struct TreeGen<'a> {
    pub names: &'a [&'a str],
    pub max_depth: usize,
}

impl Default for TreeGen<'static> {
    fn default() -> Self {
        Self {
            names: DEFAULT_NAMES,
            max_depth: 6,
        }
    }
}

impl<'a> TreeGen<'a> {
    fn name(&self, rng: &mut impl Rng) -> AstNode {
        AstNode::name(*self.names.choose(rng).expect("empty name pool"))
    }

    fn type_name(&self, rng: &mut impl Rng) -> AstNode {
        AstNode::name(*TYPES.choose(rng).unwrap())
    }

    fn literal(&self, rng: &mut impl Rng) -> AstNode {
        let pool = match rng.random_range(0..5) {
            0 => INTS,
            1 => FLOATS,
            2 => STRINGS,
            3 => &["true", "false"][..],
            _ => &["null", "7"][..],
        };
        AstNode::literal(*pool.choose(rng).unwrap())
    }

    /// A statement tree of depth at most `max_depth`.
    pub fn statement(&self, rng: &mut impl Rng) -> AstNode {
        self.statement_at(rng, self.max_depth.max(2))
    }

    fn statement_at(&self, rng: &mut impl Rng, depth: usize) -> AstNode {
        if depth <= 2 {
            return self.expr(rng, depth, 0);
        }
        match rng.random_range(0..10) {
            0 => {
                let cond = self.expr(rng, depth - 1, 0);
                let mut children = vec![cond];
                if rng.random_bool(0.5) {
                    children.push(self.statement_at(rng, depth - 1));
                }
                AstNode::branch(NodeKind::IfCondition, children)
            }
            1 => AstNode::branch(NodeKind::ReturnStatement, vec![self.expr(rng, depth - 1, 0)]),
            2 => {
                let mut children = vec![self.type_name(rng), self.name(rng)];
                if rng.random_bool(0.7) {
                    children.push(self.expr(rng, depth - 1, 0));
                }
                AstNode::branch(NodeKind::VariableDeclaration, children)
            }
            3 => {
                let n = rng.random_range(1..=3);
                let stmts = (0..n).map(|_| self.statement_at(rng, depth - 1)).collect();
                AstNode::branch(NodeKind::Block, stmts)
            }
            4 if depth >= 4 => {
                let mut children = vec![self.type_name(rng), self.name(rng)];
                for kind in [NodeKind::GetAccessor, NodeKind::SetAccessor] {
                    if children.len() == 2 || rng.random_bool(0.5) {
                        let word = if kind == NodeKind::GetAccessor { "get" } else { "set" };
                        if rng.random_bool(0.5) {
                            children.push(AstNode::leaf(kind, word));
                        } else {
                            let body = AstNode::branch(
                                NodeKind::Block,
                                vec![self.statement_at(rng, depth - 3)],
                            );
                            children.push(AstNode::branch(kind, vec![body]));
                        }
                    }
                }
                AstNode::branch(NodeKind::PropertyDeclaration, children)
            }
            5 => {
                let target = self.postfix_target(rng, depth - 1);
                let op = *[AssignOp::Assign, AssignOp::Plus, AssignOp::LeftShift]
                    .choose(rng)
                    .unwrap();
                let value = self.expr(rng, depth - 1, 0);
                AstNode::branch(NodeKind::Assignment(op), vec![target, value])
            }
            _ => self.expr(rng, depth, 0),
        }
    }

    /// A name, member access or call: something that may precede `.`/`(`.
    fn postfix_target(&self, rng: &mut impl Rng, depth: usize) -> AstNode {
        if depth <= 1 || rng.random_bool(0.5) {
            return if rng.random_bool(0.1) { AstNode::name("this") } else { self.name(rng) };
        }
        let inner = self.postfix_target(rng, depth - 1);
        match rng.random_range(0..3) {
            0 => AstNode::branch(NodeKind::MemberAccess, vec![inner, self.name(rng)]),
            1 => AstNode::branch(NodeKind::ConditionalAccess, vec![inner, self.name(rng)]),
            _ => self.call(rng, inner, depth),
        }
    }

    fn call(&self, rng: &mut impl Rng, callee: AstNode, depth: usize) -> AstNode {
        let callee = match callee.kind {
            NodeKind::NameExpression | NodeKind::MemberAccess | NodeKind::ConditionalAccess => {
                callee
            }
            _ => AstNode::branch(NodeKind::MemberAccess, vec![callee, self.name(rng)]),
        };
        let n = rng.random_range(0..=3);
        let mut children = vec![callee];
        for _ in 0..n {
            children.push(self.expr(rng, depth.saturating_sub(1), 0));
        }
        AstNode::branch(NodeKind::MethodCallExpression, children)
    }

    /// An expression of depth at most `depth`, parenthesized if needed to
    /// parse at `min_prec`.
    pub fn expr(&self, rng: &mut impl Rng, depth: usize, min_prec: u8) -> AstNode {
        let node = if depth <= 1 {
            if rng.random_bool(0.6) { self.name(rng) } else { self.literal(rng) }
        } else {
            match rng.random_range(0..12) {
                0 => self.name(rng),
                1 => self.literal(rng),
                2 | 3 => {
                    let callee = self.postfix_target(rng, depth - 1);
                    self.call(rng, callee, depth - 1)
                }
                4 => {
                    let target = self.postfix_target(rng, depth - 1);
                    AstNode::branch(NodeKind::MemberAccess, vec![target, self.name(rng)])
                }
                5 | 6 => {
                    let op = *BinaryOp::ALL
                        .iter()
                        .filter(|op| **op != BinaryOp::Is)
                        .collect::<Vec<_>>()
                        .choose(rng)
                        .unwrap();
                    let l = self.expr(rng, depth - 1, op.precedence());
                    let r = self.expr(rng, depth - 1, op.precedence() + 1);
                    binary(*op, l, r)
                }
                7 => {
                    let op = *[UnaryOp::Not, UnaryOp::Negate, UnaryOp::Complement, UnaryOp::Plus]
                        .choose(rng)
                        .unwrap();
                    let operand = self.expr(rng, depth - 1, UNARY_PRECEDENCE);
                    AstNode::branch(NodeKind::UnaryExpression(op), vec![operand])
                }
                8 => {
                    // operand must start with a token that marks a cast
                    let operand = if rng.random_bool(0.5) {
                        self.postfix_target(rng, depth - 1)
                    } else {
                        AstNode::branch(
                            NodeKind::ParenthesizedExpression,
                            vec![self.expr(rng, depth - 2, 0)],
                        )
                    };
                    AstNode::branch(NodeKind::CastExpression, vec![self.type_name(rng), operand])
                }
                9 => AstNode::branch(
                    NodeKind::ParenthesizedExpression,
                    vec![self.expr(rng, depth - 1, 0)],
                ),
                10 => {
                    let subject = self.expr(rng, depth - 1, PATTERN_PRECEDENCE + 1);
                    if rng.random_bool(0.5) {
                        AstNode::branch(
                            NodeKind::PatternMatch,
                            vec![subject, self.type_name(rng), self.name(rng)],
                        )
                    } else {
                        AstNode::branch(
                            NodeKind::BinaryExpression(BinaryOp::Is),
                            vec![subject, self.type_name(rng)],
                        )
                    }
                }
                _ => {
                    let n = rng.random_range(1..=2);
                    let params = (0..n).map(|_| self.name(rng)).collect();
                    let body = self.expr(rng, depth - 2, 0);
                    AstNode::branch(
                        NodeKind::LambdaExpression,
                        vec![AstNode::branch(NodeKind::ArgumentList, params), body],
                    )
                }
            }
        };
        parenthesize_for(node, min_prec)
    }
}
