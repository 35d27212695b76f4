use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub const SSTUB_LABELS: [&str; 11] = [
    "change caller in function call",
    "change numeral",
    "change operand",
    "change operator",
    "different method same args",
    "less specific if",
    "more specific if",
    "overload method deleted args",
    "overload method more args",
    "swap arguments",
    "swap boolean literal",
];

/// Class counts of the filtered ManySStuBs4J corpus, in label order.
pub const SSTUB_COUNTS: [usize; 11] = [1488, 4779, 741, 1711, 9383, 2095, 1836, 1040, 3820, 536, 1531];

pub const RCS_LABELS: [&str; 10] = [
    "RCS1001", "RCS1032", "RCS1049", "RCS1085", "RCS1123", "RCS1124", "RCS1146", "RCS1163",
    "RCS1168", "RCS1220",
];

pub const RCS_COUNTS: [usize; 10] = [443, 516, 574, 2163, 1428, 1067, 3368, 2053, 816, 356];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "bugfix")]
    BugFix,
    #[serde(rename = "transformation")]
    CodeTransformation,
}

impl Task {
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Task::BugFix => &SSTUB_LABELS,
            Task::CodeTransformation => &RCS_LABELS,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Task::BugFix => "bugfix",
            Task::CodeTransformation => "transformation",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bugfix" | "bug-fix" | "sstub" => Ok(Task::BugFix),
            "transformation" | "codetransformation" | "rcs" => Ok(Task::CodeTransformation),
            _ => Err(format!("unknown task {s:?} (expected bugfix or transformation)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Imported,
    Synthetic(u64),
}

/// A labelled pair of source snippets, before and after a change.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeEdit {
    pub id: String,
    #[serde(rename = "old")]
    pub old_source: String,
    #[serde(rename = "new")]
    pub new_source: String,
    pub label: String,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub task: Task,
    pub edits: Vec<CodeEdit>,
    /// Present labels, ordered as in the task's label table; anything
    /// foreign goes last in lexicographic order.
    pub class_index: BTreeMap<String, usize>,
}

impl Dataset {
    pub fn new(task: Task, edits: Vec<CodeEdit>) -> Self {
        let class_index = index_classes(task, edits.iter().map(|e| e.label.as_str()));
        Self {
            task,
            edits,
            class_index,
        }
    }

    pub fn len(&self) -> usize {
        self.edits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edits.is_empty()
    }

    /// Class names in index order.
    pub fn classes(&self) -> Vec<String> {
        let mut v: Vec<(&String, &usize)> = self.class_index.iter().collect();
        v.sort_by_key(|(_, i)| **i);
        v.into_iter().map(|(s, _)| s.clone()).collect()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.edits.iter().map(|e| self.class_index[&e.label]).collect()
    }

    pub fn num_classes(&self) -> usize {
        self.class_index.len()
    }

    pub fn subset(&self, indices: &[usize]) -> Vec<CodeEdit> {
        indices.iter().map(|&i| self.edits[i].clone()).collect()
    }
}

pub fn index_classes<'a>(task: Task, labels: impl Iterator<Item = &'a str>) -> BTreeMap<String, usize> {
    let present: std::collections::BTreeSet<&str> = labels.collect();
    let table = task.labels();
    let mut ordered: Vec<&str> = table.iter().copied().filter(|l| present.contains(l)).collect();
    ordered.extend(present.iter().copied().filter(|l| !table.contains(l)));
    ordered.into_iter().enumerate().map(|(i, l)| (l.to_string(), i)).collect()
}
