//! Recursive-descent parser for single statements.
//!
//! ```text
//! program     := statement ';'* EOF
//! statement   := block
//!              | 'if' '(' expr ')' [statement]
//!              | 'return' expr
//!              | type IDENT '{' accessor+ '}'
//!              | type IDENT ['=' expr]
//!              | expr                                  (each optionally followed by ';')
//! block       := '{' statement+ '}'
//! accessor    := ('get' | 'set') (';' | block)
//! expr        := lambda | assignment
//! lambda      := (IDENT | '(' IDENT (',' IDENT)* ')') '=>' (block | expr)
//! assignment  := binary [assign-op expr]
//! binary      := unary (binop unary | 'is' type [IDENT])*       (precedence climbing)
//! unary       := ('!' | '-' | '+' | '~') unary | '(' type ')' unary | postfix
//! postfix     := primary ('.' IDENT | '?.' IDENT | '(' args ')')*
//! primary     := IDENT | literal | 'this' | 'super' | 'null' | '(' expr ')'
//! ```

use super::ast::{AssignOp, AstNode, BinaryOp, NodeKind, UnaryOp};
use super::lexer::{Token, TokenKind, TYPE_KEYWORDS};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at token {index}: {message}")]
pub struct ParseError {
    /// Index of the offending token; equals the token count at end of input.
    pub index: usize,
    pub message: String,
}

/// Parses one statement (or bare expression) into its syntax tree.
pub fn parse(tokens: &[Token]) -> Result<AstNode, ParseError> {
    let mut p = Parser { tokens, pos: 0 };
    if tokens.is_empty() {
        return Err(p.error("empty input"));
    }
    let root = p.statement()?;
    while p.eat_punct(";") {}
    if p.pos < tokens.len() {
        return Err(p.error("unexpected trailing token"));
    }
    Ok(root)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + offset)
    }

    fn error(&self, message: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => format!("{message} (found {:?})", t.text),
            None => format!("{message} (found end of input)"),
        };
        ParseError {
            index: self.pos,
            message: found,
        }
    }

    fn eat_punct(&mut self, text: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(text)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, text: &str) -> Result<(), ParseError> {
        if self.eat_punct(text) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {text:?}")))
        }
    }

    fn is_type_token(tok: Option<&Token>) -> bool {
        tok.is_some_and(|t| {
            t.kind == TokenKind::Identifier
                || (t.kind == TokenKind::Keyword && TYPE_KEYWORDS.contains(&t.text.as_str()))
        })
    }

    fn is_ident(tok: Option<&Token>) -> bool {
        tok.is_some_and(|t| t.kind == TokenKind::Identifier)
    }

    fn type_name(&mut self) -> Result<AstNode, ParseError> {
        if Self::is_type_token(self.peek()) {
            let t = &self.tokens[self.pos];
            self.pos += 1;
            Ok(AstNode::name(t.text.clone()))
        } else {
            Err(self.error("expected type name"))
        }
    }

    fn ident(&mut self) -> Result<AstNode, ParseError> {
        if Self::is_ident(self.peek()) {
            let t = &self.tokens[self.pos];
            self.pos += 1;
            Ok(AstNode::name(t.text.clone()))
        } else {
            Err(self.error("expected identifier"))
        }
    }

    fn statement(&mut self) -> Result<AstNode, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.error("expected statement"));
        };
        let node = if tok.is_punct("{") {
            return self.block();
        } else if tok.is_keyword("if") {
            return self.if_statement();
        } else if tok.is_keyword("return") {
            self.pos += 1;
            let value = self.expr()?;
            AstNode::branch(NodeKind::ReturnStatement, vec![value])
        } else if Self::is_type_token(Some(tok)) && Self::is_ident(self.peek_at(1)) {
            let ty = self.type_name()?;
            let name = self.ident()?;
            if self.peek().is_some_and(|t| t.is_punct("{")) {
                return self.property(ty, name);
            }
            let mut children = vec![ty, name];
            if self.peek().is_some_and(|t| t.is_op("=")) {
                self.pos += 1;
                children.push(self.expr()?);
            }
            AstNode::branch(NodeKind::VariableDeclaration, children)
        } else {
            self.expr()?
        };
        self.eat_punct(";");
        Ok(node)
    }

    fn block(&mut self) -> Result<AstNode, ParseError> {
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.peek().is_some_and(|t| t.is_punct("}")) {
            if self.peek().is_none() {
                return Err(self.error("unterminated block"));
            }
            stmts.push(self.statement()?);
        }
        if stmts.is_empty() {
            return Err(self.error("empty block"));
        }
        self.expect_punct("}")?;
        Ok(AstNode::branch(NodeKind::Block, stmts))
    }

    fn if_statement(&mut self) -> Result<AstNode, ParseError> {
        self.pos += 1;
        self.expect_punct("(")?;
        let cond = self.expr()?;
        self.expect_punct(")")?;
        let mut children = vec![cond];
        match self.peek() {
            None => {}
            Some(t) if t.is_punct(";") => self.pos += 1,
            Some(t) if t.is_punct("}") => {}
            Some(t) if t.is_keyword("else") => return Err(self.error("else is not supported")),
            Some(_) => children.push(self.statement()?),
        }
        Ok(AstNode::branch(NodeKind::IfCondition, children))
    }

    fn property(&mut self, ty: AstNode, name: AstNode) -> Result<AstNode, ParseError> {
        self.expect_punct("{")?;
        let mut children = vec![ty, name];
        while let Some(t) = self.peek() {
            let kind = if t.is_keyword("get") {
                NodeKind::GetAccessor
            } else if t.is_keyword("set") {
                NodeKind::SetAccessor
            } else {
                break;
            };
            let word = t.text.clone();
            self.pos += 1;
            if self.eat_punct(";") {
                children.push(AstNode::leaf(kind, word));
            } else {
                let body = self.block()?;
                children.push(AstNode::branch(kind, vec![body]));
            }
        }
        if children.len() == 2 {
            return Err(self.error("expected accessor"));
        }
        self.expect_punct("}")?;
        Ok(AstNode::branch(NodeKind::PropertyDeclaration, children))
    }

    /// Returns the number of parameters if a lambda head starts here.
    fn lambda_head(&self) -> Option<usize> {
        if Self::is_ident(self.peek()) && self.peek_at(1).is_some_and(|t| t.is_op("=>")) {
            return Some(1);
        }
        if !self.peek().is_some_and(|t| t.is_punct("(")) {
            return None;
        }
        let mut i = 1;
        let mut count = 0;
        loop {
            if !Self::is_ident(self.peek_at(i)) {
                return None;
            }
            count += 1;
            i += 1;
            match self.peek_at(i) {
                Some(t) if t.is_punct(",") => i += 1,
                Some(t) if t.is_punct(")") => break,
                _ => return None,
            }
        }
        self.peek_at(i + 1).is_some_and(|t| t.is_op("=>")).then_some(count)
    }

    fn expr(&mut self) -> Result<AstNode, ParseError> {
        if let Some(count) = self.lambda_head() {
            let parenthesized = self.eat_punct("(");
            let mut params = Vec::with_capacity(count);
            for i in 0..count {
                if i > 0 {
                    self.expect_punct(",")?;
                }
                params.push(self.ident()?);
            }
            if parenthesized {
                self.expect_punct(")")?;
            }
            self.pos += 1; // =>
            let body = if self.peek().is_some_and(|t| t.is_punct("{")) {
                self.block()?
            } else {
                self.expr()?
            };
            let params = AstNode::branch(NodeKind::ArgumentList, params);
            return Ok(AstNode::branch(NodeKind::LambdaExpression, vec![params, body]));
        }
        self.assignment()
    }

    fn assignment(&mut self) -> Result<AstNode, ParseError> {
        let lhs = self.binary(1)?;
        if let Some(op) = self
            .peek()
            .filter(|t| t.kind == TokenKind::Operator)
            .and_then(|t| AssignOp::from_symbol(&t.text))
        {
            self.pos += 1;
            let rhs = self.expr()?;
            return Ok(AstNode::branch(NodeKind::Assignment(op), vec![lhs, rhs]));
        }
        Ok(lhs)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        let t = self.peek()?;
        if t.is_keyword("is") {
            return Some(BinaryOp::Is);
        }
        if t.kind != TokenKind::Operator {
            return None;
        }
        BinaryOp::from_symbol(&t.text)
    }

    fn binary(&mut self, min_prec: u8) -> Result<AstNode, ParseError> {
        let mut left = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            if op == BinaryOp::Is {
                let ty = self.type_name()?;
                left = if Self::is_ident(self.peek()) {
                    let name = self.ident()?;
                    AstNode::branch(NodeKind::PatternMatch, vec![left, ty, name])
                } else {
                    AstNode::branch(NodeKind::BinaryExpression(op), vec![left, ty])
                };
                continue;
            }
            let right = self.binary(prec + 1)?;
            left = AstNode::branch(NodeKind::BinaryExpression(op), vec![left, right]);
        }
        Ok(left)
    }

    fn is_cast(&self) -> bool {
        self.peek().is_some_and(|t| t.is_punct("("))
            && Self::is_type_token(self.peek_at(1))
            && self.peek_at(2).is_some_and(|t| t.is_punct(")"))
            && self.peek_at(3).is_some_and(|t| {
                t.kind == TokenKind::Identifier
                    || t.kind.is_literal()
                    || t.is_punct("(")
                    || ["this", "super", "null"].iter().any(|k| t.is_keyword(k))
            })
    }

    fn unary(&mut self) -> Result<AstNode, ParseError> {
        if let Some(op) = self
            .peek()
            .filter(|t| t.kind == TokenKind::Operator)
            .and_then(|t| UnaryOp::from_symbol(&t.text))
        {
            self.pos += 1;
            let operand = self.unary()?;
            return Ok(AstNode::branch(NodeKind::UnaryExpression(op), vec![operand]));
        }
        if self.is_cast() {
            self.pos += 1;
            let ty = self.type_name()?;
            self.pos += 1;
            let operand = self.unary()?;
            return Ok(AstNode::branch(NodeKind::CastExpression, vec![ty, operand]));
        }
        self.postfix()
    }

    fn member_name(&mut self) -> Result<AstNode, ParseError> {
        match self.peek() {
            Some(t)
                if t.kind == TokenKind::Identifier
                    || t.is_keyword("get")
                    || t.is_keyword("set") =>
            {
                self.pos += 1;
                Ok(AstNode::name(t.text.clone()))
            }
            _ => Err(self.error("expected member name")),
        }
    }

    fn postfix(&mut self) -> Result<AstNode, ParseError> {
        let mut e = self.primary()?;
        loop {
            if self.eat_punct(".") {
                let member = self.member_name()?;
                e = AstNode::branch(NodeKind::MemberAccess, vec![e, member]);
            } else if self.eat_punct("?.") {
                let member = self.member_name()?;
                e = AstNode::branch(NodeKind::ConditionalAccess, vec![e, member]);
            } else if self.peek().is_some_and(|t| t.is_punct("("))
                && matches!(
                    e.kind,
                    NodeKind::NameExpression | NodeKind::MemberAccess | NodeKind::ConditionalAccess
                )
            {
                self.pos += 1;
                let mut children = vec![e];
                if !self.eat_punct(")") {
                    loop {
                        children.push(self.expr()?);
                        if self.eat_punct(")") {
                            break;
                        }
                        self.expect_punct(",")?;
                    }
                }
                e = AstNode::branch(NodeKind::MethodCallExpression, children);
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> Result<AstNode, ParseError> {
        let Some(t) = self.peek() else {
            return Err(self.error("expected expression"));
        };
        let node = match t.kind {
            TokenKind::Identifier => AstNode::name(t.text.clone()),
            TokenKind::IntLiteral
            | TokenKind::FloatLiteral
            | TokenKind::StringLiteral
            | TokenKind::BoolLiteral => AstNode::literal(t.text.clone()),
            TokenKind::Keyword if t.text == "null" => AstNode::literal(t.text.clone()),
            TokenKind::Keyword
                if t.text == "this" || t.text == "super" || TYPE_KEYWORDS.contains(&t.text.as_str()) =>
            {
                AstNode::name(t.text.clone())
            }
            TokenKind::Punctuation if t.text == "(" => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_punct(")")?;
                return Ok(AstNode::branch(NodeKind::ParenthesizedExpression, vec![inner]));
            }
            _ => return Err(self.error("expected expression")),
        };
        self.pos += 1;
        Ok(node)
    }
}
