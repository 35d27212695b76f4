use super::{CodeEdit, DataError, Dataset, Provenance, Task, SSTUB_LABELS};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// Names of the upstream record fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FieldMap {
    pub before: String,
    pub after: String,
    pub bug_type: String,
    /// Optional field used as the edit id; records are numbered otherwise.
    pub id: Option<String>,
}

impl Default for FieldMap {
    fn default() -> Self {
        Self {
            before: "sourceBeforeFix".into(),
            after: "sourceAfterFix".into(),
            bug_type: "bugType".into(),
            id: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportOptions {
    pub fields: FieldMap,
    pub keep_change_caller: bool,
}

impl Default for ImportOptions {
    fn default() -> Self {
        Self {
            fields: FieldMap::default(),
            keep_change_caller: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ImportReport {
    pub records: usize,
    pub imported: usize,
    /// Upstream bug type → number of records dropped for it.
    pub excluded: BTreeMap<String, usize>,
}

/// `CHANGE_NUMERAL` → `change numeral`.
pub fn normalize_bug_type(raw: &str) -> String {
    raw.trim().replace('_', " ").to_lowercase()
}

fn field<'a>(rec: &'a Value, name: &str, index: usize) -> Result<&'a str, DataError> {
    rec.get(name)
        .and_then(Value::as_str)
        .ok_or_else(|| DataError::Schema {
            line: index + 1,
            message: format!("record {index} lacks string field {name:?}"),
        })
}

/// Maps a ManySStuBs4J-style JSON array onto the 11 in-scope bug-fix
/// templates. Records of other types are dropped and counted; the
/// `line` of a schema error is the 1-based record index.
pub fn import_manysstubs(json: &str, opts: &ImportOptions) -> Result<(Dataset, ImportReport), DataError> {
    let value: Value = serde_json::from_str(json).map_err(|e| DataError::Schema {
        line: e.line(),
        message: e.to_string(),
    })?;
    let records = value.as_array().ok_or_else(|| DataError::Schema {
        line: 1,
        message: "expected a JSON array of bug records".into(),
    })?;
    let mut report = ImportReport {
        records: records.len(),
        ..Default::default()
    };
    let mut edits = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let f = &opts.fields;
        let raw = field(rec, &f.bug_type, i)?;
        let label = normalize_bug_type(raw);
        let in_scope = SSTUB_LABELS.contains(&label.as_str())
            && (opts.keep_change_caller || label != "change caller in function call");
        if !in_scope {
            *report.excluded.entry(raw.to_string()).or_default() += 1;
            continue;
        }
        let id = match &f.id {
            Some(name) => match rec.get(name) {
                Some(Value::String(s)) => s.clone(),
                Some(other) => other.to_string(),
                None => format!("sstub-{:05}", i + 1),
            },
            None => format!("sstub-{:05}", i + 1),
        };
        edits.push(CodeEdit {
            id,
            old_source: field(rec, &f.before, i)?.to_string(),
            new_source: field(rec, &f.after, i)?.to_string(),
            label,
            task: Task::BugFix,
            provenance: Some(Provenance::Imported),
        });
    }
    report.imported = edits.len();
    Ok((Dataset::new(Task::BugFix, edits), report))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"[
        {"bugType": "SWAP_ARGUMENTS", "sourceBeforeFix": "f(a, b)", "sourceAfterFix": "f(b, a)"},
        {"bugType": "CHANGE_NUMERAL", "sourceBeforeFix": "x = 1", "sourceAfterFix": "x = 2"},
        {"bugType": "CHANGE_MODIFIER", "sourceBeforeFix": "", "sourceAfterFix": ""},
        {"bugType": "CHANGE_CALLER_IN_FUNCTION_CALL", "sourceBeforeFix": "a.f()", "sourceAfterFix": "b.f()"},
        {"bugType": "SWAP_BOOLEAN_LITERAL", "sourceBeforeFix": "f(true)", "sourceAfterFix": "f(false)"}
    ]"#;

    #[test]
    fn five_records_one_excluded() {
        let (d, r) = import_manysstubs(FIXTURE, &ImportOptions::default()).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(r.excluded, BTreeMap::from([("CHANGE_MODIFIER".to_string(), 1)]));
        assert_eq!(d.edits[0].label, "swap arguments");
        assert_eq!(d.edits[0].id, "sstub-00001");
    }

    #[test]
    fn change_caller_flag() {
        let opts = ImportOptions {
            keep_change_caller: false,
            ..Default::default()
        };
        let (d, r) = import_manysstubs(FIXTURE, &opts).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(r.excluded.len(), 2);
    }

    #[test]
    fn custom_fields_and_schema_errors() {
        let json = r#"[{"t": "CHANGE_OPERAND", "b": "a + b", "a": "a + c", "k": 7}]"#;
        let opts = ImportOptions {
            fields: FieldMap {
                before: "b".into(),
                after: "a".into(),
                bug_type: "t".into(),
                id: Some("k".into()),
            },
            ..Default::default()
        };
        let (d, _) = import_manysstubs(json, &opts).unwrap();
        assert_eq!(d.edits[0].id, "7");
        let err = import_manysstubs(json, &ImportOptions::default()).unwrap_err();
        assert!(matches!(err, DataError::Schema { line: 1, .. }));
        assert!(import_manysstubs("{}", &ImportOptions::default()).is_err());
    }
}
