use super::{CodeEdit, Dataset, Task};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn parse_jsonl(text: &str) -> Result<Dataset, DataError> {
    parse_lines(BufReader::new(text.as_bytes()))
}

fn parse_lines(reader: impl BufRead) -> Result<Dataset, DataError> {
    let mut edits: Vec<CodeEdit> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let edit: CodeEdit = serde_json::from_str(&line).map_err(|e| DataError::Schema {
            line: i + 1,
            message: e.to_string(),
        })?;
        if let Some(first) = edits.first() {
            if first.task != edit.task {
                return Err(DataError::Schema {
                    line: i + 1,
                    message: format!("task {} differs from earlier records ({})", edit.task, first.task),
                });
            }
        }
        edits.push(edit);
    }
    let task = edits.first().map_or(Task::BugFix, |e| e.task);
    Ok(Dataset::new(task, edits))
}

pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Dataset, DataError> {
    parse_lines(BufReader::new(File::open(path)?))
}

pub fn to_jsonl(edits: &[CodeEdit]) -> String {
    let mut out = String::new();
    for e in edits {
        out.push_str(&serde_json::to_string(e).expect("edit serializes"));
        out.push('\n');
    }
    out
}

pub fn save_jsonl(path: impl AsRef<Path>, edits: &[CodeEdit]) -> Result<(), DataError> {
    let mut w = BufWriter::new(File::create(path)?);
    for e in edits {
        serde_json::to_writer(&mut w, e).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
