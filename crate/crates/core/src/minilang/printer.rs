//! Canonical source rendering of syntax trees.
//!
//! Parentheses are printed only where the tree holds a
//! `ParenthesizedExpression`, so `parse(tokenize(print(ast)))` reproduces
//! any tree the parser itself could have produced.

use super::ast::{AstNode, NodeKind};

/// Renders a tree in statement position.
pub fn pretty_print(ast: &AstNode) -> String {
    let mut out = String::new();
    statement(ast, false, &mut out);
    out
}

/// Renders a tree in expression position (no statement terminator).
pub fn print_expression(ast: &AstNode) -> String {
    let mut out = String::new();
    expr(ast, &mut out);
    out
}

/// `nested` marks statements that may be followed by a sibling; a bodiless
/// `if` there needs an explicit `;` so the sibling is not read as its body.
fn statement(node: &AstNode, nested: bool, out: &mut String) {
    match node.kind {
        NodeKind::Block => {
            out.push_str("{ ");
            for (i, s) in node.children.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                statement(s, true, out);
            }
            out.push_str(" }");
        }
        NodeKind::IfCondition => {
            out.push_str("if (");
            expr(&node.children[0], out);
            out.push(')');
            match node.children.get(1) {
                Some(body) => {
                    out.push(' ');
                    statement(body, nested, out);
                }
                None if nested => out.push(';'),
                None => {}
            }
        }
        NodeKind::ReturnStatement => {
            out.push_str("return ");
            expr(&node.children[0], out);
            out.push(';');
        }
        NodeKind::VariableDeclaration => {
            expr(&node.children[0], out);
            out.push(' ');
            expr(&node.children[1], out);
            if let Some(init) = node.children.get(2) {
                out.push_str(" = ");
                expr(init, out);
            }
            out.push(';');
        }
        NodeKind::PropertyDeclaration => {
            expr(&node.children[0], out);
            out.push(' ');
            expr(&node.children[1], out);
            out.push_str(" {");
            for accessor in &node.children[2..] {
                out.push(' ');
                let word = if accessor.kind == NodeKind::GetAccessor { "get" } else { "set" };
                out.push_str(word);
                match accessor.children.first() {
                    Some(body) => {
                        out.push(' ');
                        statement(body, true, out);
                    }
                    None => out.push(';'),
                }
            }
            out.push_str(" }");
        }
        _ => {
            expr(node, out);
            out.push(';');
        }
    }
}

fn expr(node: &AstNode, out: &mut String) {
    if let Some(tok) = node.token() {
        out.push_str(tok);
        return;
    }
    let c = &node.children;
    match node.kind {
        NodeKind::MethodCallExpression => {
            expr(&c[0], out);
            out.push('(');
            list(&c[1..], out);
            out.push(')');
        }
        NodeKind::MemberAccess => {
            expr(&c[0], out);
            out.push('.');
            expr(&c[1], out);
        }
        NodeKind::ConditionalAccess => {
            expr(&c[0], out);
            out.push_str("?.");
            expr(&c[1], out);
        }
        NodeKind::BinaryExpression(op) => {
            expr(&c[0], out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            expr(&c[1], out);
        }
        NodeKind::PatternMatch => {
            expr(&c[0], out);
            out.push_str(" is ");
            expr(&c[1], out);
            out.push(' ');
            expr(&c[2], out);
        }
        NodeKind::UnaryExpression(op) => {
            let operand = print_expression(&c[0]);
            out.push_str(op.symbol());
            // keep `- -x` from lexing as `--`
            if operand.starts_with(op.symbol()) {
                out.push(' ');
            }
            out.push_str(&operand);
        }
        NodeKind::ParenthesizedExpression => {
            out.push('(');
            expr(&c[0], out);
            out.push(')');
        }
        NodeKind::CastExpression => {
            out.push('(');
            expr(&c[0], out);
            out.push(')');
            expr(&c[1], out);
        }
        NodeKind::Assignment(op) => {
            expr(&c[0], out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            expr(&c[1], out);
        }
        NodeKind::LambdaExpression => {
            out.push('(');
            list(&c[0].children, out);
            out.push_str(") => ");
            if c[1].kind == NodeKind::Block {
                statement(&c[1], true, out);
            } else {
                expr(&c[1], out);
            }
        }
        NodeKind::ArgumentList => list(c, out),
        _ => statement(node, true, out),
    }
}

fn list(items: &[AstNode], out: &mut String) {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        expr(item, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::{parse, tokenize};

    fn reprint(src: &str) -> String {
        pretty_print(&parse(&tokenize(src).unwrap()).unwrap())
    }

    #[test]
    fn normalizes_spacing() {
        assert_eq!(reprint("getID(932,1044)"), "getID(932, 1044);");
        assert_eq!(reprint("if(var1==false)"), "if (var1 == false)");
        assert_eq!(reprint("if (x) foo();"), "if (x) foo();");
        assert_eq!(reprint("x=-(-y)"), "x = -(-y);");
        assert_eq!(reprint("x = - -y"), "x = - -y;");
        assert_eq!(
            reprint("int Count{get{return _c;}set{_c=value;}}"),
            "int Count { get { return _c; } set { _c = value; } }"
        );
        assert_eq!(reprint("f(a => a.b)"), "f((a) => a.b);");
    }

    #[test]
    fn reprint_is_a_fixed_point() {
        for src in [
            "if (x is Foo) ((Foo)x).Bar();",
            "{ var x = a.b(1, 2.5); return x; }",
            "x?.Length > 0 && (y || !z)",
            "string Name { get; set; }",
            "{ if (a); b(); }",
        ] {
            let once = reprint(src);
            assert_eq!(reprint(&once), once);
        }
    }
}
