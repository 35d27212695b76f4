use editvec::data::{make_synthetic_corpus, prepare_edit, CodeEdit, SynthOptions, Task};
use editvec::models::*;
use editvec::nncore::*;
use editvec::pathctx::{build_vocabulary, MAX_CONTEXTS, PAD};
use ndarray::{s, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(left: &[u32], path: &[u32], right: &[u32]) -> ContextIds {
    ContextIds {
        left: left.to_vec(),
        path: path.to_vec(),
        right: right.to_vec(),
    }
}

fn micro_edit() -> EncodedEdit {
    EncodedEdit {
        old: vec![ctx(&[2], &[2, 3, 2], &[3, 4]), ctx(&[5], &[2, 4], &[3])],
        new: vec![ctx(&[3, 4], &[2, 3, 2], &[2]), ctx(&[5], &[2, 4], &[3])],
    }
}

fn small_edit2vec(seed: u64) -> Edit2Vec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Edit2Vec::new(6, 6, 3, DropoutConfig::default(), &mut rng)
}

fn bugfix_edits(labels: &[&str], per_class: usize, seed: u64) -> (Vec<CodeEdit>, Vec<usize>, Vec<String>) {
    let mut d = make_synthetic_corpus(Task::BugFix, per_class, seed, SynthOptions::default());
    d.edits.retain(|e| labels.contains(&e.label.as_str()));
    let classes: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let y = d.edits.iter().map(|e| classes.iter().position(|c| *c == e.label).unwrap()).collect();
    (d.edits, y, classes)
}

#[test]
fn architecture_dimensions() {
    let e = small_edit2vec(1);
    e.assert_dimensions();
    assert_eq!(e.subtokens.dim(), 32);
    assert_eq!(e.paths.dim(), 128);
    assert_eq!(e.pce.output_dim(), 128);
    assert_eq!(e.code.output_dim(), 160);
    assert_eq!(e.hidden.output_dim(), 80);
    let emb = e.embed(&micro_edit(), 2).unwrap();
    assert_eq!((emb.r_old.len(), emb.r_new.len()), (160, 160));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let b = LstmBaseline::new(10, 11, 0.8, &mut rng);
    b.assert_dimensions();
    assert_eq!(b.lstm.hidden(), 196);
    assert_eq!(b.hidden.output_dim(), 80);
    let emb = b.embed(&TokenEdit { old: vec![2, 3], new: vec![3, 2, 4] }).unwrap();
    assert_eq!(emb.r_old.len(), 196);
    assert!(matches!(b.classify(emb.r_old.view(), emb.r_old.slice(s![..100])), Err(NnError::Shape(_))));
}

#[test]
fn subtoken_vectors_are_means() {
    let e = small_edit2vec(3);
    let once = e.pce_forward(&ctx(&[2], &[2, 3], &[4])).unwrap();
    let twice = e.pce_forward(&ctx(&[2, 2], &[2, 3], &[4, 4])).unwrap();
    assert!((&once - &twice).iter().all(|d| d.abs() < 1e-12));

    let mixed = e.pce_forward(&ctx(&[2, 4], &[2, 3], &[4])).unwrap();
    let mut swapped_emb = e.clone();
    let (r2, r4) = (swapped_emb.subtokens.table.value.row(2).to_owned(), swapped_emb.subtokens.table.value.row(4).to_owned());
    swapped_emb.subtokens.table.value.row_mut(2).assign(&r4);
    swapped_emb.subtokens.table.value.row_mut(4).assign(&r2);
    let mixed_again = swapped_emb.pce_forward(&ctx(&[4, 2], &[2, 3], &[2])).unwrap();
    assert!((&mixed - &mixed_again).iter().all(|d| d.abs() < 1e-12));
}

#[test]
fn single_context_gets_all_attention() {
    let e = small_edit2vec(4);
    let cpcv = e.pce_forward(&ctx(&[2], &[2, 3], &[4])).unwrap();
    let (r, w) = e.code_encoder_forward(cpcv.view().insert_axis(ndarray::Axis(0)), &[true]).unwrap();
    assert_eq!(w.to_vec(), vec![1.0]);
    let direct = e.code.forward(cpcv.insert_axis(ndarray::Axis(0)).view()).unwrap();
    assert_eq!(r, direct.row(0));
}

#[test]
fn padding_slots_change_nothing() {
    let e = small_edit2vec(5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let contexts: Vec<ContextIds> = (0..5)
        .map(|_| ctx(&[rng.random_range(2..6)], &[rng.random_range(2..6), rng.random_range(2..6)], &[rng.random_range(2..6)]))
        .collect();
    let mut real = Array2::zeros((5, 128));
    for (i, c) in contexts.iter().enumerate() {
        real.row_mut(i).assign(&e.pce_forward(c).unwrap());
    }
    let (r5, w5) = e.code_encoder_forward(real.view(), &[true; 5]).unwrap();

    let mut padded = Array2::from_shape_simple_fn((40, 128), || rng.random_range(-5.0..5.0));
    padded.slice_mut(s![..5, ..]).assign(&real);
    let mut mask = vec![false; 40];
    mask[..5].fill(true);
    let (r40, w40) = e.code_encoder_forward(padded.view(), &mask).unwrap();
    assert_eq!(r5, r40);
    assert_eq!(w5, w40.slice(s![..5]));
    assert!(w40.slice(s![5..]).iter().all(|&w| w == 0.0));

    let edit = EncodedEdit {
        old: contexts.clone(),
        new: contexts[..3].to_vec(),
    };
    let a = e.embed(&edit, 5).unwrap();
    let b = e.embed(&edit, 40).unwrap();
    assert_eq!((&a.r_old, &a.r_new), (&b.r_old, &b.r_new));
    assert_eq!(b.attention_old.as_ref().unwrap().len(), 40);
    assert!(b.attention_old.unwrap().slice(s![5..]).iter().all(|&w| w == 0.0));
    assert!((&a.r_old - &r5).iter().all(|d| d.abs() < 1e-12));

    assert!(matches!(e.code_encoder_forward(padded.view(), &[false; 40]), Err(NnError::AllMasked)));
}

#[test]
fn zero_classifier_is_uniform() {
    let mut e = small_edit2vec(7);
    e.hidden.w.value.fill(0.0);
    e.output.w.value.fill(0.0);
    if let Some(b) = e.output.b.as_mut() {
        b.value.fill(0.0);
    }
    let emb = e.embed(&micro_edit(), 2).unwrap();
    let p = e.classify(emb.r_old.view(), emb.r_new.view()).unwrap();
    assert!(p.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
}

#[test]
fn classify_agrees_with_batched_inference() {
    let e = small_edit2vec(8);
    let edit = micro_edit();
    let emb = e.embed(&edit, 2).unwrap();
    let p = e.classify(emb.r_old.view(), emb.r_new.view()).unwrap();
    let (logits, _) = e.infer(&[&edit]).unwrap();
    let q = softmax(logits.row(0));
    assert!((&p - &q).iter().all(|d| d.abs() < 1e-12));
}

#[test]
fn siamese_symmetry() {
    let e = small_edit2vec(9);
    let edit = micro_edit();
    let a = e.embed(&edit, 2).unwrap();
    let b = e.embed(&edit.swapped(), 2).unwrap();
    assert_eq!((a.r_old, a.r_new), (b.r_new, b.r_old));

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let base = LstmBaseline::new(12, 4, 0.8, &mut rng);
    let t = TokenEdit { old: vec![2, 5, 7, 3], new: vec![2, 7, 5, 3, 11] };
    let a = base.embed(&t).unwrap();
    let b = base.embed(&t.swapped()).unwrap();
    assert_eq!((a.r_old, a.r_new), (b.r_new, b.r_old));

    let same = base.embed(&TokenEdit { old: vec![4, 6], new: vec![4, 6] }).unwrap();
    assert_eq!(same.r_old, same.r_new);
}

#[test]
fn edit2vec_end_to_end_gradient() {
    let mut e = small_edit2vec(11);
    let edit = micro_edit();
    let report = grad_check_sampled(&mut e, 150, 21, |m, backward| {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (out, cache) = m.forward(&[&edit], Some(&mut rng)).unwrap();
        let (loss, d_logits) = softmax_cross_entropy_batch(out.logits.view(), &[1]);
        if backward {
            m.backward(&cache, d_logits);
        }
        loss
    });
    assert_eq!(report.checked, e.params().iter().map(|(_, p)| p.len().min(150)).sum::<usize>());
    assert!(report.passes(GRAD_CHECK_TOLERANCE), "{report:?}");
}

#[test]
fn lstm_baseline_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut base = LstmBaseline::new(6, 3, 0.8, &mut rng);
    let batch = [TokenEdit { old: vec![2, 3, 4], new: vec![2, 4] }, TokenEdit { old: vec![5], new: vec![5, 5, 3] }];
    let refs: Vec<&TokenEdit> = batch.iter().collect();
    let report = grad_check_sampled(&mut base, 150, 22, |m, backward| {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let (out, cache) = m.forward(&refs, Some(&mut rng)).unwrap();
        let (loss, d_logits) = softmax_cross_entropy_batch(out.logits.view(), &[2, 0]);
        if backward {
            m.backward(&cache, d_logits);
        }
        loss
    });
    assert!(report.passes(GRAD_CHECK_TOLERANCE), "{report:?}");
}

#[test]
fn pad_embedding_never_moves() {
    let d = make_synthetic_corpus(Task::BugFix, 3, 15, SynthOptions::default());
    let labels = d.labels();
    let cfg = TrainConfig { epochs: 2, batch_size: 8, ..Default::default() };
    let model = TrainedModel::train(&ModelSpec::Lstm(cfg), &d.edits, &labels, &d.classes()).unwrap();
    match &model.classifier {
        Classifier::Lstm { net, .. } => assert!(net.tokens.table.value.row(PAD as usize).iter().all(|&v| v == 0.0)),
        _ => unreachable!(),
    }
}

#[test]
fn two_class_toy_is_learned() {
    let (edits, labels, classes) = bugfix_edits(&["swap arguments", "change numeral"], 100, 7);
    assert_eq!(edits.len(), 200);
    for kind in ["edit2vec", "lstm"] {
        let cfg = TrainConfig { epochs: 15, batch_size: 32, seed: 7, ..Default::default() };
        let spec = if kind == "edit2vec" { ModelSpec::Edit2vec(cfg) } else { ModelSpec::Lstm(cfg) };
        let model = TrainedModel::train(&spec, &edits, &labels, &classes).unwrap();
        let log = model.log.as_ref().unwrap();
        assert!(log.first_epoch_loss < log.initial_loss, "{kind}: {log:?}");
        assert!(log.train_accuracy >= 0.95, "{kind}: {}", log.train_accuracy);
        let predicted = model.predict(&edits).unwrap();
        let acc = predicted.iter().zip(&labels).filter(|(p, y)| p == y).count() as f64 / 200.0;
        assert_eq!(acc, log.train_accuracy);
    }
}

#[test]
fn one_sample_per_class_is_memorized() {
    let (edits, labels, classes) = bugfix_edits(&["swap boolean literal", "change operand"], 1, 16);
    let cfg = TrainConfig { epochs: 40, batch_size: 2, ..Default::default() };
    for spec in [ModelSpec::Edit2vec(cfg.clone()), ModelSpec::Lstm(cfg.clone())] {
        let model = TrainedModel::train(&spec, &edits, &labels, &classes).unwrap();
        assert_eq!(model.log.as_ref().unwrap().train_accuracy, 1.0, "{}", spec.name());
    }
}

#[test]
fn empty_training_set_is_an_error() {
    let classes = vec!["a".to_string(), "b".to_string()];
    let r = TrainedModel::train(&ModelSpec::Edit2vec(TrainConfig::default()), &[], &[], &classes);
    assert!(matches!(r, Err(ModelError::EmptyDataset)), "{r:?}");
}

#[test]
fn checkpoints_round_trip() {
    let d = make_synthetic_corpus(Task::CodeTransformation, 4, 17, SynthOptions::default());
    let labels = d.labels();
    let classes = d.classes();
    let cfg = TrainConfig { epochs: 2, batch_size: 16, ..Default::default() };
    let dir = tempfile::tempdir().unwrap();
    let specs = [
        ModelSpec::Edit2vec(cfg.clone()),
        ModelSpec::Lstm(cfg),
        ModelSpec::Bow(BowOptions { mode: BowMode::TfIdf, svm: SvmConfig { kernel: Kernel::Rbf, ..Default::default() } }),
    ];
    for spec in specs {
        let model = TrainedModel::train(&spec, &d.edits, &labels, &classes).unwrap();
        let path = dir.path().join(format!("{}.ckpt", spec.name()));
        model.save(&path).unwrap();
        assert!(sidecar_path(&path).exists());
        let loaded = TrainedModel::load(&path).unwrap();
        assert_eq!(loaded.spec, model.spec);
        assert_eq!(loaded.param_count(), model.param_count());
        let (a, b) = (model.predict_proba(&d.edits).unwrap(), loaded.predict_proba(&d.edits).unwrap());
        assert_eq!(a, b, "{}", spec.name());
        for row in a.rows() {
            assert!((row.sum() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn tampered_vocabulary_is_rejected() {
    let d = make_synthetic_corpus(Task::BugFix, 2, 18, SynthOptions::default());
    let cfg = TrainConfig { epochs: 1, ..Default::default() };
    let model = TrainedModel::train(&ModelSpec::Edit2vec(cfg), &d.edits, &d.labels(), &d.classes()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.ckpt");
    model.save(&path).unwrap();
    let side = sidecar_path(&path);
    let text = std::fs::read_to_string(&side).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["vocabulary"]["subtokens"][2] = "tampered".into();
    std::fs::write(&side, json.to_string()).unwrap();
    assert!(matches!(TrainedModel::load(&path), Err(ModelError::Checkpoint(_))));
}

#[test]
fn encoded_edits_use_the_vocabulary() {
    let d = make_synthetic_corpus(Task::BugFix, 2, 19, SynthOptions::default());
    let contexts: Vec<_> = d.edits.iter().map(|e| prepare_edit(e, MAX_CONTEXTS).unwrap()).collect();
    let vocab = build_vocabulary(&contexts, &[], 1);
    for c in &contexts {
        let enc = EncodedEdit::encode(c, &vocab);
        assert_eq!(enc.old.len(), c.old_contexts.len());
        assert_eq!(enc.new.len(), c.new_contexts.len());
        for (ids, pc) in enc.old.iter().zip(&c.old_contexts) {
            let words: Vec<&str> = ids.path.iter().map(|&i| vocab.path_labels.word(i).unwrap()).collect();
            assert_eq!(words, pc.path_labels.iter().map(String::as_str).collect::<Vec<_>>());
        }
    }
    let long: Vec<String> = (0..100).map(|i| format!("t{i}")).collect();
    let t = TokenEdit::encode(&long, &long[..3], &vocab.tokens);
    assert_eq!((t.old.len(), t.new.len()), (MAX_SEQUENCE_LEN, 3));
}
