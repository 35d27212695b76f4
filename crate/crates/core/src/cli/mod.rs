//! The `editvec` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{ConfigFile, SEED_ENV};

use crate::data::{DataError, Task};
use crate::eval::EvalError;
use crate::models::{BowMode, Kernel, ModelError, ModelKind};
use crate::nncore::NnError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<NnError> for CliError {
    fn from(e: NnError) -> Self {
        match e {
            NnError::Config(m) => CliError::Usage(m),
            NnError::Checkpoint(_) | NnError::Io(_) | NnError::Index { .. } | NnError::EmptySequence | NnError::AllMasked => {
                CliError::Data(e.to_string())
            }
            NnError::Shape(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Nn(n) => n.into(),
            ModelError::Config(m) => CliError::Usage(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Model(m) => m.into(),
            EvalError::Config(m) => CliError::Usage(m),
            EvalError::DegenerateVariance => CliError::Numeric(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "editvec", version, about = "Classify source-code edits with path-context, LSTM and bag-of-words models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a balanced synthetic corpus of labelled edits.
    Synth(SynthArgs),
    /// Import ManySStuBs4J bug records from a JSON array.
    Import(ImportArgs),
    /// Drop edits that cannot be tokenized, parsed or encoded.
    Filter(FilterArgs),
    /// Canonicalize identifiers and literals of every edit.
    Canon(InOut),
    /// Write the path-contexts of every edit as JSONL.
    Extract(ExtractArgs),
    /// Train one model and write a checkpoint.
    Train(TrainArgs),
    /// Label edits with a trained checkpoint.
    Predict(PredictArgs),
    /// Repeated stratified k-fold cross-validation of several models.
    Crossval(CrossvalArgs),
    /// Normality and t-tests on the accuracies of two reports.
    Stats(StatsArgs),
    /// t-SNE projection of a layer's activations, with an SVG plot.
    Project(ProjectArgs),
    /// Finite-difference gradient checks of both neural models.
    Gradcheck(GradcheckArgs),
}

#[derive(Debug, Args)]
pub struct InOut {
    /// Input JSONL dataset.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Output JSONL dataset.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// bugfix or transformation.
    pub task: Task,
    /// Edits per class.
    #[arg(long, default_value_t = 100)]
    pub per_class: usize,
    /// Falls back to EDITVEC_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Draw each class's identifiers from a disjoint slice of the name pool.
    #[arg(long)]
    pub per_class_identifiers: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    /// Upstream format; only manysstubs is known.
    #[arg(long, default_value = "manysstubs")]
    pub format: String,
    /// JSON file naming the before/after/bugType/id fields.
    #[arg(long)]
    pub field_map: Option<PathBuf>,
    /// Drop "change caller in function call" records (kept by default).
    #[arg(long)]
    pub exclude_change_caller: bool,
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Where to write the exclusion report; stdout otherwise.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub io: InOut,
    #[arg(long, default_value_t = crate::pathctx::MAX_CONTEXTS)]
    pub max_contexts: usize,
    /// Where to write the per-reason drop counts; stdout otherwise.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub io: InOut,
    #[arg(long, default_value_t = crate::pathctx::MAX_CONTEXTS)]
    pub max_contexts: usize,
}

/// Hyperparameter flags shared by `train` and `crossval`. Each overrides
/// the matching key of `--config`.
#[derive(Debug, Args, Clone, Default)]
pub struct HyperArgs {
    /// Flat JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Falls back to the config file, then EDITVEC_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Training epochs [default: 100].
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Minibatch size [default: 128].
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Adam step size [default: 0.001].
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Bag-of-words weighting, count or tfidf [default: count].
    #[arg(long)]
    pub bow_mode: Option<BowMode>,
    /// SVM kernel, linear or rbf [default: linear].
    #[arg(long)]
    pub kernel: Option<Kernel>,
    /// SVM regularization constant [default: 1].
    #[arg(long)]
    pub c: Option<f64>,
    /// RBF width [default: 1 / feature dimension].
    #[arg(long)]
    pub gamma: Option<f64>,
}

impl HyperArgs {
    pub fn resolve(&self) -> Result<ConfigFile, CliError> {
        let flags = ConfigFile {
            seed: self.seed,
            epochs: self.epochs,
            batch_size: self.batch_size,
            learning_rate: self.learning_rate,
            bow_mode: self.bow_mode,
            kernel: self.kernel,
            c: self.c,
            gamma: self.gamma,
            ..Default::default()
        };
        Ok(ConfigFile::load(self.config.as_deref())?.merge(flags))
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// edit2vec, lstm or bow.
    #[arg(long)]
    pub model: ModelKind,
    /// Training JSONL dataset.
    #[arg(long, short)]
    pub data: PathBuf,
    /// Binary checkpoint; its JSON sidecar goes next to it with ".json" appended.
    #[arg(long)]
    pub out_checkpoint: PathBuf,
    #[command(flatten)]
    pub hyper: HyperArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long, short)]
    pub data: PathBuf,
    /// JSONL of {id, predicted_label, probabilities}.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CrossvalArgs {
    #[arg(long, short)]
    pub data: PathBuf,
    /// Comma-separated: edit2vec, lstm, bow or bow-<count|tfidf>-<linear|rbf>.
    #[arg(long, value_delimiter = ',', default_value = "lstm,edit2vec")]
    pub models: Vec<String>,
    #[arg(long, default_value_t = 3)]
    pub runs: usize,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Parallel fold jobs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Canonicalize the dataset first.
    #[arg(long)]
    pub canon: bool,
    /// JSON array of reports, one per model.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Where to write the accuracy table; stdout otherwise.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[command(flatten)]
    pub hyper: HyperArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// First report file (a report or an array of them).
    pub first: PathBuf,
    /// Second report file.
    pub second: PathBuf,
    /// Model to take from the first file when it holds several.
    #[arg(long)]
    pub first_model: Option<String>,
    /// Model to take from the second file when it holds several.
    #[arg(long)]
    pub second_model: Option<String>,
    /// Where to write the JSON result; stdout otherwise.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long, short)]
    pub data: PathBuf,
    /// prelogits (the layer before the softmax) or logits.
    #[arg(long, default_value = "prelogits")]
    pub layer: String,
    /// JSONL of {id, label, x, y}.
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: PathBuf,
    #[arg(long, default_value_t = 30.0)]
    pub perplexity: f64,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    /// Falls back to EDITVEC_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    /// Entries probed per parameter array.
    #[arg(long, default_value_t = 150)]
    pub per_param: usize,
    /// Largest acceptable relative error.
    #[arg(long, default_value_t = crate::nncore::GRAD_CHECK_TOLERANCE)]
    pub tolerance: f64,
    /// Falls back to EDITVEC_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
