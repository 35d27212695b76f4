//! Repeated stratified cross-validation, significance tests, t-SNE
//! projection and SVG scatter plots.

mod crossval;
mod folds;
mod plot;
mod stats;
mod table;
mod tsne;

pub use crossval::{cross_validate, pairwise_ttests, CrossValConfig, EvalReport, FoldOutcome, ModelFamily};
pub use folds::{stratified_kfold, stratified_kfold_dataset};
pub use plot::{emit_scatter, palette_color, render_scatter};
pub use stats::{dagostino_pearson, students_ttest, NormalityTest, TTest, MIN_NORMALITY_SAMPLES};
pub use table::render_accuracy_table;
pub use tsne::{conditional_affinities, joint_affinities, tsne_project, TsneConfig};

use thiserror::Error;

use crate::models::ModelError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("class {class} has {count} samples, fewer than the {folds} folds")]
    ClassTooSmall { class: String, count: usize, folds: usize },
    #[error("{0} samples; the normality test needs at least {MIN_NORMALITY_SAMPLES}")]
    TooFewSamples(usize),
    #[error("both samples are constant and equal")]
    DegenerateVariance,
    #[error("perplexity {perplexity} is too large for {points} points")]
    PerplexityTooLarge { perplexity: f64, points: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
