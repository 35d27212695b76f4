//! Code-edit classification with AST path-contexts.
//!
//! The crate covers the whole pipeline: a small C-family parser
//! ([`minilang`]), path-context extraction ([`pathctx`]), identifier and
//! literal canonicalization ([`canon`]), a hand-written neural kernel
//! ([`nncore`]), the edit2vec / LSTM / bag-of-words classifiers
//! ([`models`]), datasets and synthetic edit generators ([`data`]), the
//! evaluation protocol ([`eval`]) and the `editvec` command line ([`cli`]).

pub mod minilang;
pub mod pathctx;
pub mod canon;
pub mod data;
pub mod nncore;
pub mod models;
pub mod eval;
pub mod cli;
