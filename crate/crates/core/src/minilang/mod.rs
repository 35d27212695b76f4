//! Lexer, parser and printer for a small C-family statement language.
//!
//! The grammar covers single-line statements: method calls, member and
//! conditional access, literals, unary/binary operators, casts,
//! assignments, `if` conditions, pattern matches, lambdas, local
//! declarations, `return`, blocks and property declarations. Anything else
//! is rejected with a [`LexError`] or [`ParseError`].

mod ast;
mod lexer;
mod parser;
mod printer;
pub mod random;

pub use ast::{
    AssignOp, AstNode, BinaryOp, NodeKind, UnaryOp, PATTERN_PRECEDENCE, PRIMARY_PRECEDENCE,
    UNARY_PRECEDENCE,
};
pub use lexer::{tokenize, LexError, Token, TokenKind, KEYWORDS, TYPE_KEYWORDS};
pub use parser::{parse, ParseError};
pub use printer::{pretty_print, print_expression};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Tokenizes and parses `source` in one step.
pub fn parse_source(source: &str) -> Result<AstNode, SyntaxError> {
    let tokens = tokenize(source)?;
    Ok(parse(&tokens)?)
}

#[cfg(test)]
mod tests {
    use super::random::TreeGen;
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn print_parse_round_trip(seed in any::<u64>(), depth in 2usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gen = TreeGen { max_depth: depth, ..TreeGen::default() };
            let ast = gen.statement(&mut rng);
            prop_assert!(ast.is_well_formed());
            let printed = pretty_print(&ast);
            let reparsed = parse_source(&printed);
            prop_assert!(reparsed.is_ok(), "{} -> {:?}", printed, reparsed);
            prop_assert_eq!(reparsed.unwrap(), ast, "{}", printed);
        }

        #[test]
        fn tokenize_and_parse_are_deterministic(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let src = pretty_print(&TreeGen::default().statement(&mut rng));
            prop_assert_eq!(tokenize(&src), tokenize(&src));
            prop_assert_eq!(parse_source(&src), parse_source(&src));
        }
    }
}
