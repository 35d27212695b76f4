//! Joint renaming of identifiers and literals across both sides of an edit.
//!
//! `getID(932, 1044)` becomes `var1(1, 2)`. Numbering is per edit and runs
//! over the old side first, then the new side, so a symbol shared by both
//! sides gets the same placeholder on each.

use crate::data::CodeEdit;
use crate::minilang::{tokenize, LexError, Token, TokenKind};
use std::collections::HashMap;

#[derive(Default)]
struct Renamer {
    identifiers: HashMap<String, String>,
    ints: HashMap<String, String>,
    floats: HashMap<String, String>,
    strings: HashMap<String, String>,
}

/// The k-th canonical float: 0.001·k with the fewest digits that still
/// read as a float literal.
pub fn canonical_float(k: usize) -> String {
    let s = format!("{}", k as f64 / 1000.0);
    if s.contains('.') { s } else { format!("{s}.0") }
}

impl Renamer {
    fn replacement(&mut self, tok: &Token) -> Option<String> {
        let (table, make): (_, fn(usize) -> String) = match tok.kind {
            TokenKind::Identifier => (&mut self.identifiers, |k| format!("var{k}")),
            TokenKind::IntLiteral => (&mut self.ints, |k| k.to_string()),
            TokenKind::FloatLiteral => (&mut self.floats, canonical_float),
            TokenKind::StringLiteral => (&mut self.strings, |k| format!("\"string{k}\"")),
            _ => return None,
        };
        let next = table.len() + 1;
        Some(table.entry(tok.text.clone()).or_insert_with(|| make(next)).clone())
    }

    fn rewrite(&mut self, source: &str, tokens: &[Token]) -> String {
        let mut out = String::with_capacity(source.len());
        let mut last = 0;
        for t in tokens {
            out.push_str(&source[last..t.span.0]);
            match self.replacement(t) {
                Some(r) => out.push_str(&r),
                None => out.push_str(&t.text),
            }
            last = t.span.1;
        }
        out.push_str(&source[last..]);
        out
    }
}

/// Canonicalizes an (old, new) pair, keeping all whitespace in place.
pub fn canonicalize_pair(old: &str, new: &str) -> Result<(String, String), LexError> {
    let old_tokens = tokenize(old)?;
    let new_tokens = tokenize(new)?;
    let mut r = Renamer::default();
    let o = r.rewrite(old, &old_tokens);
    let n = r.rewrite(new, &new_tokens);
    Ok((o, n))
}

pub fn canonicalize_edit(edit: &CodeEdit) -> Result<CodeEdit, LexError> {
    let (old_source, new_source) = canonicalize_pair(&edit.old_source, &edit.new_source)?;
    Ok(CodeEdit {
        old_source,
        new_source,
        ..edit.clone()
    })
}
