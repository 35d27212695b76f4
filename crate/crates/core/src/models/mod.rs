//! The edit2vec network, the LSTM baseline and the bag-of-words SVMs,
//! plus a common train/predict/persist front.

mod baseline;
mod bow;
mod classifier;
mod edit2vec;
mod encode;
mod network;
mod svm;

pub use baseline::{LstmBaseline, LstmBaselineCache, LstmBaselineOutput};
pub use bow::{BowMode, BowVector, BowVectorizer};
pub use classifier::{sidecar_path, BowOptions, Classifier, ModelKind, ModelSpec, Sidecar, TrainedModel};
pub use edit2vec::{Edit2Vec, Edit2VecCache, Edit2VecOutput};
pub use encode::{edit_tokens, ContextIds, EncodedEdit, TokenEdit};
pub use network::{argmax_rows, fit_network, infer_all, EditEmbedding, Network, TrainingLog};
pub use svm::{svm_train, FourierFeatures, Kernel, Svm, SvmConfig};

use thiserror::Error;

use crate::nncore::NnError;

pub const SUBTOKEN_DIM: usize = 32;
pub const PATH_EMBEDDING_DIM: usize = 128;
pub const PATH_HIDDEN_PER_DIRECTION: usize = 80;
pub const CPCV_DIM: usize = 128;
pub const EDIT2VEC_R_DIM: usize = 160;
pub const CLASSIFIER_HIDDEN: usize = 80;
pub const TOKEN_EMBEDDING_DIM: usize = 64;
pub const BASELINE_R_DIM: usize = 196;
pub const MAX_SEQUENCE_LEN: usize = 64;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error("edit {id}: {reason}")]
    Prepare { id: String, reason: String },
    #[error("class {class} has {count} samples; at least 2 are needed")]
    DegenerateLabels { class: usize, count: usize },
    #[error("no training data")]
    EmptyDataset,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("bad checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
