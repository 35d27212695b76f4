//! Path-context extraction, fixed-size edit encoding and vocabularies.

mod encode;
mod extract;
mod subtoken;
mod vocab;

pub use encode::{
    encode_edit, mask_for, EditPathContexts, OverflowPolicy, Side, TooManyContexts, MAX_CONTEXTS,
};
pub use extract::{extract_path_contexts, node_label, PathContext};
pub use subtoken::split_subtokens;
pub use vocab::{build_vocabulary, Lexicon, Vocabulary, PAD, PAD_TOKEN, UNK, UNK_TOKEN};
