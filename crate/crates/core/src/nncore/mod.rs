//! A small deterministic neural-network kernel with hand-written backward
//! passes. Everything is 64-bit and single-threaded per model instance.

mod array;
mod attention;
mod checkpoint;
mod config;
mod dropout;
mod gradcheck;
mod layers;
mod loss;
mod lstm;
mod optim;

pub use array::{prefixed, prefixed_mut, Parameterized, RealArray};
pub use attention::{attention_pool, Attention, AttentionCache, SCORE_HIDDEN};
pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC};
pub use config::{DropoutConfig, TrainConfig};
pub use dropout::dropout_apply;
pub use gradcheck::{grad_check, grad_check_sampled, relative_error, GradCheckReport, GRAD_CHECK_STEP, GRAD_CHECK_TOLERANCE};
pub use layers::{Activation, Dense, Embedding};
pub use loss::{softmax, softmax_cross_entropy, softmax_cross_entropy_batch};
pub use lstm::{BiLstm, BiLstmCache, Lstm, LstmCache};
pub use optim::{adam_step, Adam, AdamConfig, AdamState};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("id {id} out of range for table of {size} rows")]
    Index { id: usize, size: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("every slot is masked")]
    AllMasked,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
