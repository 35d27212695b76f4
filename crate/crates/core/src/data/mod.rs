//! Labelled code edits: the dataset model, JSONL persistence, the
//! ManySStuBs4J importer, filtering and synthetic edit generators.

mod build;
mod filter;
mod import;
mod jsonl;
mod model;
mod names;
mod rewrite;
mod synth;

pub use filter::{filter_pipeline, prepare_edit, DropReason, FilterReport};
pub use import::{import_manysstubs, normalize_bug_type, FieldMap, ImportOptions, ImportReport};
pub use jsonl::{load_jsonl, parse_jsonl, save_jsonl, to_jsonl, DataError};
pub use model::{
    index_classes, CodeEdit, Dataset, Provenance, Task, RCS_COUNTS, RCS_LABELS, SSTUB_COUNTS,
    SSTUB_LABELS,
};
pub use names::{IdentifierScope, NamePool};
pub use rewrite::{apply_analyzer, apply_sstub, reparses};
pub use synth::{
    make_synthetic_corpus, synth_sstub, synth_transformation, within_limits, SynthOptions,
    MAX_TERMINALS, MIN_TERMINALS,
};
