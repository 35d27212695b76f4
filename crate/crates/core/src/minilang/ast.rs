use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinaryOp {
    Or,
    And,
    BitOr,
    Xor,
    BitAnd,
    Equals,
    NotEquals,
    Less,
    LessEquals,
    Greater,
    GreaterEquals,
    Is,
    LeftShift,
    RightShift,
    Plus,
    Minus,
    Times,
    Divide,
    Remainder,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 19] = [
        BinaryOp::Or,
        BinaryOp::And,
        BinaryOp::BitOr,
        BinaryOp::Xor,
        BinaryOp::BitAnd,
        BinaryOp::Equals,
        BinaryOp::NotEquals,
        BinaryOp::Less,
        BinaryOp::LessEquals,
        BinaryOp::Greater,
        BinaryOp::GreaterEquals,
        BinaryOp::Is,
        BinaryOp::LeftShift,
        BinaryOp::RightShift,
        BinaryOp::Plus,
        BinaryOp::Minus,
        BinaryOp::Times,
        BinaryOp::Divide,
        BinaryOp::Remainder,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Or => "||",
            BinaryOp::And => "&&",
            BinaryOp::BitOr => "|",
            BinaryOp::Xor => "^",
            BinaryOp::BitAnd => "&",
            BinaryOp::Equals => "==",
            BinaryOp::NotEquals => "!=",
            BinaryOp::Less => "<",
            BinaryOp::LessEquals => "<=",
            BinaryOp::Greater => ">",
            BinaryOp::GreaterEquals => ">=",
            BinaryOp::Is => "is",
            BinaryOp::LeftShift => "<<",
            BinaryOp::RightShift => ">>",
            BinaryOp::Plus => "+",
            BinaryOp::Minus => "-",
            BinaryOp::Times => "*",
            BinaryOp::Divide => "/",
            BinaryOp::Remainder => "%",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BinaryOp::Or => "or",
            BinaryOp::And => "and",
            BinaryOp::BitOr => "binOr",
            BinaryOp::Xor => "xor",
            BinaryOp::BitAnd => "binAnd",
            BinaryOp::Equals => "equals",
            BinaryOp::NotEquals => "notEquals",
            BinaryOp::Less => "less",
            BinaryOp::LessEquals => "lessEquals",
            BinaryOp::Greater => "greater",
            BinaryOp::GreaterEquals => "greaterEquals",
            BinaryOp::Is => "is",
            BinaryOp::LeftShift => "leftShift",
            BinaryOp::RightShift => "rightShift",
            BinaryOp::Plus => "plus",
            BinaryOp::Minus => "minus",
            BinaryOp::Times => "times",
            BinaryOp::Divide => "divide",
            BinaryOp::Remainder => "remainder",
        }
    }

    /// Binding strength; larger binds tighter. All binary operators are
    /// left-associative.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::BitOr => 3,
            BinaryOp::Xor => 4,
            BinaryOp::BitAnd => 5,
            BinaryOp::Equals | BinaryOp::NotEquals => 6,
            BinaryOp::Less
            | BinaryOp::LessEquals
            | BinaryOp::Greater
            | BinaryOp::GreaterEquals
            | BinaryOp::Is => 7,
            BinaryOp::LeftShift | BinaryOp::RightShift => 8,
            BinaryOp::Plus | BinaryOp::Minus => 9,
            BinaryOp::Times | BinaryOp::Divide | BinaryOp::Remainder => 10,
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.symbol() == sym)
    }
}

/// Precedence of a pattern match (`x is T y`), same level as relational operators.
pub const PATTERN_PRECEDENCE: u8 = 7;
/// Precedence of prefix unary operators and casts.
pub const UNARY_PRECEDENCE: u8 = 11;
/// Precedence of primaries and postfix forms (calls, member access).
pub const PRIMARY_PRECEDENCE: u8 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnaryOp {
    Not,
    Negate,
    Plus,
    Complement,
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::Negate => "-",
            UnaryOp::Plus => "+",
            UnaryOp::Complement => "~",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Not => "not",
            UnaryOp::Negate => "negative",
            UnaryOp::Plus => "positive",
            UnaryOp::Complement => "inverse",
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Self> {
        [UnaryOp::Not, UnaryOp::Negate, UnaryOp::Plus, UnaryOp::Complement]
            .into_iter()
            .find(|op| op.symbol() == sym)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AssignOp {
    Assign,
    Plus,
    Minus,
    Times,
    Divide,
    Remainder,
    BitAnd,
    BitOr,
    Xor,
    LeftShift,
    RightShift,
}

impl AssignOp {
    const ALL: [AssignOp; 11] = [
        AssignOp::Assign,
        AssignOp::Plus,
        AssignOp::Minus,
        AssignOp::Times,
        AssignOp::Divide,
        AssignOp::Remainder,
        AssignOp::BitAnd,
        AssignOp::BitOr,
        AssignOp::Xor,
        AssignOp::LeftShift,
        AssignOp::RightShift,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            AssignOp::Assign => "=",
            AssignOp::Plus => "+=",
            AssignOp::Minus => "-=",
            AssignOp::Times => "*=",
            AssignOp::Divide => "/=",
            AssignOp::Remainder => "%=",
            AssignOp::BitAnd => "&=",
            AssignOp::BitOr => "|=",
            AssignOp::Xor => "^=",
            AssignOp::LeftShift => "<<=",
            AssignOp::RightShift => ">>=",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AssignOp::Assign => "assign",
            AssignOp::Plus => "plus",
            AssignOp::Minus => "minus",
            AssignOp::Times => "times",
            AssignOp::Divide => "divide",
            AssignOp::Remainder => "remainder",
            AssignOp::BitAnd => "binAnd",
            AssignOp::BitOr => "binOr",
            AssignOp::Xor => "xor",
            AssignOp::LeftShift => "leftShift",
            AssignOp::RightShift => "rightShift",
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.symbol() == sym)
    }
}

/// Node kinds. Operator-bearing kinds carry their operator, which becomes
/// part of the path label (`BinaryExpression:less`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    NameExpression,
    MethodCallExpression,
    BinaryExpression(BinaryOp),
    UnaryExpression(UnaryOp),
    Literal,
    ParenthesizedExpression,
    CastExpression,
    Assignment(AssignOp),
    IfCondition,
    ArgumentList,
    MemberAccess,
    Block,
    PatternMatch,
    ConditionalAccess,
    PropertyDeclaration,
    GetAccessor,
    SetAccessor,
    ReturnStatement,
    VariableDeclaration,
    LambdaExpression,
}

impl NodeKind {
    pub fn base_name(self) -> &'static str {
        match self {
            NodeKind::NameExpression => "NameExpression",
            NodeKind::MethodCallExpression => "MethodCallExpression",
            NodeKind::BinaryExpression(_) => "BinaryExpression",
            NodeKind::UnaryExpression(_) => "UnaryExpression",
            NodeKind::Literal => "Literal",
            NodeKind::ParenthesizedExpression => "ParenthesizedExpression",
            NodeKind::CastExpression => "CastExpression",
            NodeKind::Assignment(_) => "Assignment",
            NodeKind::IfCondition => "IfCondition",
            NodeKind::ArgumentList => "ArgumentList",
            NodeKind::MemberAccess => "MemberAccess",
            NodeKind::Block => "Block",
            NodeKind::PatternMatch => "PatternMatch",
            NodeKind::ConditionalAccess => "ConditionalAccess",
            NodeKind::PropertyDeclaration => "PropertyDeclaration",
            NodeKind::GetAccessor => "GetAccessor",
            NodeKind::SetAccessor => "SetAccessor",
            NodeKind::ReturnStatement => "ReturnStatement",
            NodeKind::VariableDeclaration => "VariableDeclaration",
            NodeKind::LambdaExpression => "LambdaExpression",
        }
    }

    pub fn label(self) -> String {
        match self {
            NodeKind::BinaryExpression(op) => format!("BinaryExpression:{}", op.name()),
            NodeKind::UnaryExpression(op) => format!("UnaryExpression:{}", op.name()),
            NodeKind::Assignment(op) => format!("Assignment:{}", op.name()),
            other => other.base_name().to_string(),
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A syntax tree node. Leaves carry the terminal token text; inner nodes
/// carry ordered children whose `sibling_index` equals their position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AstNode {
    pub kind: NodeKind,
    pub sibling_index: usize,
    pub children: Vec<AstNode>,
    pub terminal_token: Option<String>,
}

impl AstNode {
    pub fn leaf(kind: NodeKind, token: impl Into<String>) -> Self {
        Self {
            kind,
            sibling_index: 0,
            children: Vec::new(),
            terminal_token: Some(token.into()),
        }
    }

    /// Builds an inner node and renumbers the children.
    ///
    /// Panics if `children` is empty, since a childless inner node would
    /// be indistinguishable from a leaf without a token.
    pub fn branch(kind: NodeKind, children: Vec<AstNode>) -> Self {
        assert!(!children.is_empty(), "{kind} node needs at least one child");
        let mut node = Self {
            kind,
            sibling_index: 0,
            children,
            terminal_token: None,
        };
        node.renumber();
        node
    }

    pub fn name(token: impl Into<String>) -> Self {
        Self::leaf(NodeKind::NameExpression, token)
    }

    pub fn literal(token: impl Into<String>) -> Self {
        Self::leaf(NodeKind::Literal, token)
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn token(&self) -> Option<&str> {
        self.terminal_token.as_deref()
    }

    /// Resets `sibling_index` of the direct children to their positions.
    pub fn renumber(&mut self) {
        for (i, child) in self.children.iter_mut().enumerate() {
            child.sibling_index = i;
        }
    }

    /// Leaves in source (left-to-right) order.
    pub fn leaves(&self) -> Vec<&AstNode> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a AstNode>) {
        if self.is_leaf() {
            out.push(self);
        } else {
            for c in &self.children {
                c.collect_leaves(out);
            }
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(AstNode::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(AstNode::depth).max().unwrap_or(0)
    }

    /// Checks the structural invariants: leaf iff token, sibling indices
    /// equal positions.
    pub fn is_well_formed(&self) -> bool {
        (self.is_leaf() == self.terminal_token.is_some())
            && self
                .children
                .iter()
                .enumerate()
                .all(|(i, c)| c.sibling_index == i && c.is_well_formed())
    }

    /// Node at a child-index path from this node.
    pub fn at(&self, path: &[usize]) -> Option<&AstNode> {
        path.iter().try_fold(self, |node, &i| node.children.get(i))
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut AstNode> {
        path.iter().try_fold(self, |node, &i| node.children.get_mut(i))
    }

    /// Child-index paths of every node (pre-order) satisfying `pred`.
    pub fn find_paths(&self, pred: &dyn Fn(&AstNode) -> bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.find_into(pred, &mut prefix, &mut out);
        out
    }

    fn find_into(
        &self,
        pred: &dyn Fn(&AstNode) -> bool,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pred(self) {
            out.push(prefix.clone());
        }
        for (i, c) in self.children.iter().enumerate() {
            prefix.push(i);
            c.find_into(pred, prefix, out);
            prefix.pop();
        }
    }

    /// Structural shape without terminal text: kinds and sibling indices.
    pub fn same_shape(&self, other: &AstNode) -> bool {
        self.kind == other.kind
            && self.sibling_index == other.sibling_index
            && self.children.len() == other.children.len()
            && self.is_leaf() == other.is_leaf()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.same_shape(b))
    }
}
