use std::collections::HashSet;

use editvec::canon::canonicalize_edit;
use editvec::data::*;
use editvec::minilang::{parse_source, tokenize};
use editvec::pathctx::{build_vocabulary, MAX_CONTEXTS};
use sha2::{Digest, Sha256};

fn edit(i: usize, old: &str, new: &str, label: &str) -> CodeEdit {
    CodeEdit {
        id: format!("e{i}"),
        old_source: old.into(),
        new_source: new.into(),
        label: label.into(),
        task: Task::BugFix,
        provenance: None,
    }
}

#[test]
fn jsonl_round_trip_preserves_utf8_bytes() {
    let edits: Vec<CodeEdit> = (0..100)
        .map(|i| {
            edit(
                i,
                &format!("log(\"größe {i} ✓\")"),
                &format!("log(\"naïve {i} · ok\")"),
                SSTUB_LABELS[i % SSTUB_LABELS.len()],
            )
        })
        .collect();
    let text = to_jsonl(&edits);
    let back = parse_jsonl(&text).unwrap();
    assert_eq!(back.edits, edits);
    let digest = |s: &str| hex::encode(Sha256::digest(s.as_bytes()));
    assert_eq!(digest(&to_jsonl(&back.edits)), digest(&text));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edits.jsonl");
    save_jsonl(&path, &edits).unwrap();
    assert_eq!(load_jsonl(&path).unwrap().edits, edits);
}

#[test]
fn missing_label_reports_the_line() {
    let mut lines: Vec<String> = to_jsonl(&[edit(0, "a", "b", "change operand"), edit(1, "c", "d", "change operand")])
        .lines()
        .map(String::from)
        .collect();
    lines.push(r#"{"id":"x","old":"a","new":"b","task":"bugfix"}"#.into());
    match parse_jsonl(&lines.join("\n")) {
        Err(DataError::Schema { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected schema error, got {other:?}"),
    }
}

#[test]
fn filter_drops_with_reasons() {
    let args: Vec<String> = (0..9).map(|i| format!("arg{i}")).collect();
    let wide = format!("call({})", args.join(", "));
    let wide_new = format!("call({})", args.iter().rev().cloned().collect::<Vec<_>>().join(", "));
    let d = Dataset::new(
        Task::BugFix,
        vec![
            edit(0, "§§§", "x", "change operand"),
            edit(1, "f(a, b)", "f(b, a)", "swap arguments"),
            edit(2, &wide, &wide_new, "swap arguments"),
            edit(3, "f(a", "f(a)", "change operand"),
            edit(4, "f(a)", "f(a)", "change operand"),
        ],
    );
    assert_eq!(parse_source(&wide).unwrap().leaves().len(), 10);
    let (kept, report) = filter_pipeline(&d, MAX_CONTEXTS);
    assert_eq!(kept.len(), 1);
    assert_eq!(kept.edits[0].id, "e1");
    assert_eq!(report.total, 5);
    assert_eq!(report.count(DropReason::Untokenizable), 1);
    assert_eq!(report.count(DropReason::TooManyContexts), 1);
    assert_eq!(report.count(DropReason::Unparsable), 1);
    assert_eq!(report.count(DropReason::Unchanged), 1);
}

#[test]
fn canonicalization_is_idempotent_and_shape_preserving() {
    let mut edits = make_synthetic_corpus(Task::BugFix, 50, 3, SynthOptions::default()).edits;
    edits.extend(make_synthetic_corpus(Task::CodeTransformation, 50, 3, SynthOptions::default()).edits);
    assert_eq!(edits.len(), 1050);
    for e in &edits {
        let c = canonicalize_edit(e).unwrap();
        assert_eq!(canonicalize_edit(&c).unwrap(), c);
        for (raw, canon) in [(&e.old_source, &c.old_source), (&e.new_source, &c.new_source)] {
            let a = parse_source(raw).unwrap();
            let b = parse_source(canon).unwrap();
            assert!(a.same_shape(&b), "{raw} vs {canon}");
            assert_eq!(tokenize(raw).unwrap().len(), tokenize(canon).unwrap().len());
        }
    }
}

#[test]
fn vocabulary_covers_every_distinct_string() {
    let d = make_synthetic_corpus(Task::CodeTransformation, 50, 11, SynthOptions::default());
    assert_eq!(d.len(), 500);
    let encoded: Vec<_> = d.edits.iter().map(|e| prepare_edit(e, MAX_CONTEXTS).unwrap()).collect();
    let tokens: Vec<Vec<String>> = d
        .edits
        .iter()
        .map(|e| {
            let mut t: Vec<String> = tokenize(&e.old_source).unwrap().into_iter().map(|t| t.text).collect();
            t.extend(tokenize(&e.new_source).unwrap().into_iter().map(|t| t.text));
            t
        })
        .collect();
    let vocab = build_vocabulary(&encoded, &tokens, 1);

    let mut subs = HashSet::new();
    let mut paths = HashSet::new();
    for enc in &encoded {
        for c in enc.old_contexts.iter().chain(&enc.new_contexts) {
            subs.extend(c.left_subtokens.iter().chain(&c.right_subtokens).cloned());
            paths.extend(c.path_labels.iter().cloned());
        }
    }
    let toks: HashSet<&String> = tokens.iter().flatten().collect();
    assert_eq!(vocab.subtokens.len(), subs.len() + 2);
    assert_eq!(vocab.path_labels.len(), paths.len() + 2);
    assert_eq!(vocab.tokens.len(), toks.len() + 2);
}
