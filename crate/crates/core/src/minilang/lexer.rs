//! Maximal-munch lexer for the C-family statement language.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Identifier,
    IntLiteral,
    FloatLiteral,
    StringLiteral,
    BoolLiteral,
    Keyword,
    Operator,
    Punctuation,
}

impl TokenKind {
    pub fn is_literal(self) -> bool {
        matches!(
            self,
            TokenKind::IntLiteral
                | TokenKind::FloatLiteral
                | TokenKind::StringLiteral
                | TokenKind::BoolLiteral
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte range `[start, end)` in the source.
    pub span: (usize, usize),
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punctuation, text)
    }

    pub fn is_op(&self, text: &str) -> bool {
        self.is(TokenKind::Operator, text)
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.is(TokenKind::Keyword, text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unexpected character {ch:?} at byte offset {offset}")]
pub struct LexError {
    pub offset: usize,
    pub ch: char,
}

/// Reserved words. `true`/`false` are lexed as [`TokenKind::BoolLiteral`].
pub const KEYWORDS: &[&str] = &[
    "if", "else", "return", "null", "is", "get", "set", "var", "this", "super", "new", "int",
    "long", "float", "double", "bool", "boolean", "string", "char", "byte", "short", "void",
    "object",
];

/// Keywords that may stand where a type name is expected.
pub const TYPE_KEYWORDS: &[&str] = &[
    "var", "int", "long", "float", "double", "bool", "boolean", "string", "char", "byte", "short",
    "void", "object",
];

const OPERATORS: &[&str] = &[
    "<<=", ">>=", "?.", "=>", "==", "!=", "<=", ">=", "&&", "||", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "<<", ">>", "++", "--", "+", "-", "*", "/", "%", "=", "<", ">", "!", "~",
    "&", "|", "^", "?",
];

const PUNCTUATION: &[char] = &['(', ')', '{', '}', '[', ']', ';', ',', '.', ':'];

/// Splits `source` into tokens. Whitespace between tokens is skipped; any
/// other character outside the alphabet is a [`LexError`].
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let kind = if c.is_ascii_alphabetic() || c == b'_' || c == b'$' {
            while pos < bytes.len()
                && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_' || bytes[pos] == b'$')
            {
                pos += 1;
            }
            let word = &source[start..pos];
            if word == "true" || word == "false" {
                TokenKind::BoolLiteral
            } else if KEYWORDS.contains(&word) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if c.is_ascii_digit() {
            lex_number(bytes, &mut pos)
        } else if c == b'"' || c == b'\'' {
            lex_string(source, &mut pos)?;
            TokenKind::StringLiteral
        } else if PUNCTUATION.contains(&(c as char)) {
            // `?.` is handled with the operators, but a lone `.` is punctuation
            pos += 1;
            TokenKind::Punctuation
        } else if let Some(op) = OPERATORS.iter().find(|op| source[pos..].starts_with(**op)) {
            pos += op.len();
            if *op == "?." {
                TokenKind::Punctuation
            } else {
                TokenKind::Operator
            }
        } else {
            let ch = source[pos..].chars().next().unwrap_or('\u{fffd}');
            return Err(LexError { offset: pos, ch });
        };
        tokens.push(Token {
            kind,
            text: source[start..pos].to_string(),
            span: (start, pos),
        });
    }
    Ok(tokens)
}

fn lex_number(bytes: &[u8], pos: &mut usize) -> TokenKind {
    let digits = |pos: &mut usize| {
        while *pos < bytes.len() && (bytes[*pos].is_ascii_digit() || bytes[*pos] == b'_') {
            *pos += 1;
        }
    };
    if bytes[*pos] == b'0' && matches!(bytes.get(*pos + 1), Some(b'x') | Some(b'X')) {
        *pos += 2;
        while *pos < bytes.len() && bytes[*pos].is_ascii_hexdigit() {
            *pos += 1;
        }
        if matches!(bytes.get(*pos), Some(b'L') | Some(b'l')) {
            *pos += 1;
        }
        return TokenKind::IntLiteral;
    }
    digits(pos);
    let mut float = false;
    if bytes.get(*pos) == Some(&b'.') && bytes.get(*pos + 1).is_some_and(|b| b.is_ascii_digit()) {
        float = true;
        *pos += 1;
        digits(pos);
    }
    if matches!(bytes.get(*pos), Some(b'e') | Some(b'E')) {
        let mut look = *pos + 1;
        if matches!(bytes.get(look), Some(b'+') | Some(b'-')) {
            look += 1;
        }
        if bytes.get(look).is_some_and(|b| b.is_ascii_digit()) {
            float = true;
            *pos = look;
            digits(pos);
        }
    }
    match bytes.get(*pos) {
        Some(b'f') | Some(b'F') | Some(b'd') | Some(b'D') | Some(b'm') | Some(b'M') => {
            *pos += 1;
            TokenKind::FloatLiteral
        }
        Some(b'L') | Some(b'l') if !float => {
            *pos += 1;
            TokenKind::IntLiteral
        }
        _ if float => TokenKind::FloatLiteral,
        _ => TokenKind::IntLiteral,
    }
}

fn lex_string(source: &str, pos: &mut usize) -> Result<(), LexError> {
    let bytes = source.as_bytes();
    let quote = bytes[*pos];
    let start = *pos;
    *pos += 1;
    while *pos < bytes.len() {
        match bytes[*pos] {
            b'\\' => *pos += 2,
            b'\n' => break,
            b if b == quote => {
                *pos += 1;
                return Ok(());
            }
            _ => *pos += 1,
        }
    }
    Err(LexError {
        offset: start,
        ch: quote as char,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds_and_texts(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn member_call_statement() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_texts("url.toString();"),
            vec![
                (Identifier, "url".into()),
                (Punctuation, ".".into()),
                (Identifier, "toString".into()),
                (Punctuation, "(".into()),
                (Punctuation, ")".into()),
                (Punctuation, ";".into()),
            ]
        );
    }

    #[test]
    fn empty_source() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("  \n\t").unwrap().is_empty());
    }

    #[test]
    fn integer_arguments() {
        let toks = tokenize("waitForJobExecutor(3000, 500)").unwrap();
        assert_eq!(toks.len(), 6);
        let ints: Vec<_> = toks
            .iter()
            .filter(|t| t.kind == TokenKind::IntLiteral)
            .map(|t| t.text.as_str())
            .collect();
        assert_eq!(ints, ["3000", "500"]);
    }

    #[test]
    fn maximal_munch_operators() {
        let texts: Vec<_> = tokenize("a<<=b?.c=>d!=e").unwrap().into_iter().map(|t| t.text).collect();
        assert_eq!(texts, ["a", "<<=", "b", "?.", "c", "=>", "d", "!=", "e"]);
    }

    #[test]
    fn literals() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_texts(r#"2.345 10L 1e5 3f "a\"b" 'c' true null"#),
            vec![
                (FloatLiteral, "2.345".into()),
                (IntLiteral, "10L".into()),
                (FloatLiteral, "1e5".into()),
                (FloatLiteral, "3f".into()),
                (StringLiteral, r#""a\"b""#.into()),
                (StringLiteral, "'c'".into()),
                (BoolLiteral, "true".into()),
                (Keyword, "null".into()),
            ]
        );
    }

    #[test]
    fn rejects_foreign_characters() {
        let err = tokenize("x = §§§").unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.ch, '§');
        assert!(tokenize("a # b").is_err());
        assert!(tokenize("\"unterminated").is_err());
    }

    #[test]
    fn non_ascii_inside_strings_is_preserved() {
        let toks = tokenize("say(\"héllo ✓\")").unwrap();
        assert_eq!(toks[2].text, "\"héllo ✓\"");
    }

    #[test]
    fn spans_reproduce_source() {
        let src = "if (var1 == false)  foo(1,2);";
        let toks = tokenize(src).unwrap();
        let mut rebuilt = String::new();
        let mut last = 0;
        for t in &toks {
            assert!(t.span.0 >= last);
            rebuilt.push_str(&src[last..t.span.0]);
            rebuilt.push_str(&t.text);
            last = t.span.1;
        }
        rebuilt.push_str(&src[last..]);
        assert_eq!(rebuilt, src);
    }
}
