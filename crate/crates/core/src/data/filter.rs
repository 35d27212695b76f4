use super::{CodeEdit, Dataset};
use crate::minilang::{parse, tokenize, AstNode};
use crate::pathctx::{encode_edit, EditPathContexts, OverflowPolicy};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    Untokenizable,
    Unparsable,
    TooManyContexts,
    NoContexts,
    Unchanged,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::Untokenizable => "untokenizable",
            DropReason::Unparsable => "unparsable",
            DropReason::TooManyContexts => "too_many_contexts",
            DropReason::NoContexts => "no_contexts",
            DropReason::Unchanged => "unchanged",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub total: usize,
    pub kept: usize,
    pub dropped: BTreeMap<DropReason, usize>,
}

impl FilterReport {
    pub fn count(&self, reason: DropReason) -> usize {
        self.dropped.get(&reason).copied().unwrap_or(0)
    }

    /// `{reason: count}` with every reason listed.
    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for r in [
            DropReason::Untokenizable,
            DropReason::Unparsable,
            DropReason::TooManyContexts,
            DropReason::NoContexts,
            DropReason::Unchanged,
        ] {
            m.insert(r.as_str().into(), self.count(r).into());
        }
        serde_json::json!({ "total": self.total, "kept": self.kept, "dropped": m })
    }
}

fn parse_side(source: &str) -> Result<AstNode, DropReason> {
    let tokens = tokenize(source).map_err(|_| DropReason::Untokenizable)?;
    parse(&tokens).map_err(|_| DropReason::Unparsable)
}

/// Parses and encodes one edit, or says why it cannot be used.
pub fn prepare_edit(edit: &CodeEdit, max_contexts: usize) -> Result<EditPathContexts, DropReason> {
    let old = parse_side(&edit.old_source);
    let new = parse_side(&edit.new_source);
    // a lexing failure on either side outranks a parse failure
    let (old, new) = match (old, new) {
        (Err(DropReason::Untokenizable), _) | (_, Err(DropReason::Untokenizable)) => {
            return Err(DropReason::Untokenizable)
        }
        (Ok(o), Ok(n)) => (o, n),
        _ => return Err(DropReason::Unparsable),
    };
    if edit.old_source == edit.new_source {
        return Err(DropReason::Unchanged);
    }
    let enc = encode_edit(&old, &new, max_contexts, OverflowPolicy::Reject)
        .map_err(|_| DropReason::TooManyContexts)?;
    if enc.old_contexts.is_empty() || enc.new_contexts.is_empty() {
        return Err(DropReason::NoContexts);
    }
    Ok(enc)
}

/// Drops edits that cannot be tokenized, parsed or encoded within
/// `max_contexts` path-contexts per side.
pub fn filter_pipeline(dataset: &Dataset, max_contexts: usize) -> (Dataset, FilterReport) {
    let mut report = FilterReport {
        total: dataset.len(),
        ..Default::default()
    };
    let mut kept = Vec::new();
    for e in &dataset.edits {
        match prepare_edit(e, max_contexts) {
            Ok(_) => kept.push(e.clone()),
            Err(r) => *report.dropped.entry(r).or_default() += 1,
        }
    }
    report.kept = kept.len();
    (Dataset::new(dataset.task, kept), report)
}
