use serde::{Deserialize, Serialize};

use super::MAX_SEQUENCE_LEN;
use crate::minilang::{tokenize, LexError};
use crate::pathctx::{EditPathContexts, Lexicon, PathContext, Vocabulary, PAD};

/// One path-context as vocabulary ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContextIds {
    pub left: Vec<u32>,
    pub path: Vec<u32>,
    pub right: Vec<u32>,
}

fn lookup(lex: &Lexicon, words: &[String]) -> Vec<u32> {
    if words.is_empty() {
        return vec![PAD];
    }
    words.iter().map(|w| lex.id(w)).collect()
}

impl ContextIds {
    pub fn encode(ctx: &PathContext, vocab: &Vocabulary) -> Self {
        Self {
            left: lookup(&vocab.subtokens, &ctx.left_subtokens),
            path: lookup(&vocab.path_labels, &ctx.path_labels),
            right: lookup(&vocab.subtokens, &ctx.right_subtokens),
        }
    }
}

/// The unmasked path-contexts of both sides of an edit, as ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedEdit {
    pub old: Vec<ContextIds>,
    pub new: Vec<ContextIds>,
}

impl EncodedEdit {
    pub fn encode(edit: &EditPathContexts, vocab: &Vocabulary) -> Self {
        let side = |ctxs: &[PathContext], mask: &[bool]| -> Vec<ContextIds> {
            ctxs.iter()
                .zip(mask.iter().chain(std::iter::repeat(&true)))
                .filter(|(_, &m)| m)
                .map(|(c, _)| ContextIds::encode(c, vocab))
                .collect()
        };
        Self {
            old: side(&edit.old_contexts, &edit.old_mask),
            new: side(&edit.new_contexts, &edit.new_mask),
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            old: self.new.clone(),
            new: self.old.clone(),
        }
    }
}

/// Token texts of both sides of an edit.
pub fn edit_tokens(old_source: &str, new_source: &str) -> Result<(Vec<String>, Vec<String>), LexError> {
    let texts = |s: &str| -> Result<Vec<String>, LexError> { Ok(tokenize(s)?.into_iter().map(|t| t.text).collect()) };
    Ok((texts(old_source)?, texts(new_source)?))
}

/// Token ids of both sides, truncated to [`MAX_SEQUENCE_LEN`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenEdit {
    pub old: Vec<u32>,
    pub new: Vec<u32>,
}

impl TokenEdit {
    pub fn encode(old_tokens: &[String], new_tokens: &[String], lexicon: &Lexicon) -> Self {
        let ids = |t: &[String]| lookup(lexicon, &t[..t.len().min(MAX_SEQUENCE_LEN)]);
        Self {
            old: ids(old_tokens),
            new: ids(new_tokens),
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            old: self.new.clone(),
            new: self.old.clone(),
        }
    }
}
