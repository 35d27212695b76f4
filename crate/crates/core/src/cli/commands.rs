use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::*;
use crate::canon::canonicalize_edit;
use crate::data::*;
use crate::eval::*;
use crate::models::*;
use crate::nncore::*;

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Synth(a) => synth(a),
        Command::Import(a) => import(a),
        Command::Filter(a) => filter(a),
        Command::Canon(a) => canon(a),
        Command::Extract(a) => extract(a),
        Command::Train(a) => train(a),
        Command::Predict(a) => predict(a),
        Command::Crossval(a) => crossval(a),
        Command::Stats(a) => stats(a),
        Command::Project(a) => project(a),
        Command::Gradcheck(a) => gradcheck(a),
    }
}

fn seed_of(flag: Option<u64>) -> Result<u64, CliError> {
    ConfigFile { seed: flag, ..Default::default() }.resolved_seed()
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match path {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Dataset, CliError> {
    load_jsonl(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn synth(a: SynthArgs) -> Result<(), CliError> {
    let seed = seed_of(a.seed)?;
    let scope = if a.per_class_identifiers { IdentifierScope::PerClass } else { IdentifierScope::Shared };
    log::info!("synth task={} per_class={} seed={seed} scope={scope:?}", a.task, a.per_class);
    let d = make_synthetic_corpus(a.task, a.per_class, seed, SynthOptions { scope });
    save_jsonl(&a.out, &d.edits)?;
    log::info!("wrote {} edits to {}", d.len(), a.out.display());
    Ok(())
}

fn import(a: ImportArgs) -> Result<(), CliError> {
    if a.format != "manysstubs" {
        return Err(CliError::Usage(format!("unknown import format {:?} (expected manysstubs)", a.format)));
    }
    let fields = match &a.field_map {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => FieldMap::default(),
    };
    let opts = ImportOptions {
        fields,
        keep_change_caller: !a.exclude_change_caller,
    };
    log::info!("import fields={:?} keep_change_caller={}", opts.fields, opts.keep_change_caller);
    let text = std::fs::read_to_string(&a.input).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    let (d, report) = import_manysstubs(&text, &opts)?;
    save_jsonl(&a.out, &d.edits)?;
    write_json(a.report.as_deref(), &report)
}

fn filter(a: FilterArgs) -> Result<(), CliError> {
    let d = load(&a.io.input)?;
    log::info!("filter max_contexts={}", a.max_contexts);
    let (kept, report) = filter_pipeline(&d, a.max_contexts);
    save_jsonl(&a.io.out, &kept.edits)?;
    write_json(a.report.as_deref(), &report.to_json())
}

fn canonicalized(d: &Dataset) -> Result<Dataset, CliError> {
    let edits = d
        .edits
        .iter()
        .map(|e| canonicalize_edit(e).map_err(|err| CliError::Data(format!("edit {}: {err}", e.id))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dataset::new(d.task, edits))
}

fn canon(a: InOut) -> Result<(), CliError> {
    let d = canonicalized(&load(&a.input)?)?;
    save_jsonl(&a.out, &d.edits)?;
    Ok(())
}

fn extract(a: ExtractArgs) -> Result<(), CliError> {
    let d = load(&a.io.input)?;
    let mut out = String::new();
    for e in &d.edits {
        let c = prepare_edit(e, a.max_contexts)
            .map_err(|r| CliError::Data(format!("edit {}: {} (run `filter` first)", e.id, r.as_str())))?;
        let record = json!({
            "id": e.id,
            "label": e.label,
            "old_contexts": c.old_contexts,
            "new_contexts": c.new_contexts,
        });
        let _ = writeln!(out, "{}", serde_json::to_string(&record)?);
    }
    write_text(&a.io.out, &out)
}

fn spec_for(kind: ModelKind, cfg: &ConfigFile) -> Result<ModelSpec, CliError> {
    Ok(match kind {
        ModelKind::Edit2vec => ModelSpec::Edit2vec(cfg.train_config()?),
        ModelKind::Lstm => ModelSpec::Lstm(cfg.train_config()?),
        ModelKind::Bow => ModelSpec::Bow(cfg.bow_options()?),
    })
}

/// `edit2vec`, `lstm`, `bow` or `bow-<mode>-<kernel>`.
fn parse_model(name: &str, cfg: &ConfigFile) -> Result<ModelSpec, CliError> {
    if let Some(rest) = name.strip_prefix("bow-") {
        let (mode, kernel) = rest
            .split_once('-')
            .ok_or_else(|| CliError::Usage(format!("model {name:?} should look like bow-count-linear")))?;
        let cfg = ConfigFile {
            bow_mode: Some(mode.parse().map_err(CliError::Usage)?),
            kernel: Some(kernel.parse().map_err(CliError::Usage)?),
            ..cfg.clone()
        };
        return spec_for(ModelKind::Bow, &cfg);
    }
    spec_for(name.parse().map_err(CliError::Usage)?, cfg)
}

fn train(a: TrainArgs) -> Result<(), CliError> {
    let cfg = a.hyper.resolve()?;
    let spec = spec_for(a.model, &cfg)?;
    log::info!("resolved config: {}", serde_json::to_string(&spec)?);
    let d = load(&a.data)?;
    if d.is_empty() {
        return Err(CliError::Data(format!("{} holds no edits", a.data.display())));
    }
    let model = TrainedModel::train(&spec, &d.edits, &d.labels(), &d.classes())?;
    if let Some(log) = &model.log {
        log::info!("training accuracy {:.4}, {} parameters", log.train_accuracy, model.param_count());
    }
    model.save(&a.out_checkpoint)?;
    Ok(())
}

fn predict(a: PredictArgs) -> Result<(), CliError> {
    let model = TrainedModel::load(&a.checkpoint)?;
    let d = load(&a.data)?;
    let probs = model.predict_proba(&d.edits)?;
    let mut out = String::new();
    for (e, row) in d.edits.iter().zip(probs.rows()) {
        let best = argmax_rows(row.insert_axis(ndarray::Axis(0)))[0];
        let mut p = Map::new();
        for (c, v) in model.classes.iter().zip(row) {
            p.insert(c.clone(), json!(v));
        }
        let record = json!({"id": e.id, "predicted_label": model.classes[best], "probabilities": p});
        let _ = writeln!(out, "{}", serde_json::to_string(&record)?);
    }
    write_text(&a.out, &out)
}

fn crossval(a: CrossvalArgs) -> Result<(), CliError> {
    let cfg = a.hyper.resolve()?;
    let specs = a.models.iter().map(|m| parse_model(m.trim(), &cfg)).collect::<Result<Vec<_>, _>>()?;
    let cv = CrossValConfig {
        runs: a.runs,
        folds: a.folds,
        seed: cfg.resolved_seed()?,
        jobs: a.jobs,
    };
    log::info!("crossval {} canon={} models: {}", serde_json::to_string(&cv)?, a.canon, serde_json::to_string(&specs)?);
    let mut d = load(&a.data)?;
    if d.is_empty() {
        return Err(CliError::Data(format!("{} holds no edits", a.data.display())));
    }
    if a.canon {
        d = canonicalized(&d)?;
    }
    let mut reports = Vec::new();
    for spec in &specs {
        let r = cross_validate(spec, &d, &cv, a.canon)?;
        log::info!("{}: mean accuracy {:.4}", r.model, r.mean_accuracy);
        reports.push(r);
    }
    pairwise_ttests(&mut reports);
    write_json(Some(&a.out), &reports)?;
    let table = render_accuracy_table(&reports);
    match &a.table {
        Some(p) => write_text(p, &table),
        None => {
            print!("{table}");
            Ok(())
        }
    }
}

fn pick_report(path: &Path, model: Option<&str>) -> Result<EvalReport, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let reports: Vec<EvalReport> = match value {
        Value::Array(_) => serde_json::from_value(value),
        other => serde_json::from_value(other).map(|r| vec![r]),
    }
    .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut found: Vec<EvalReport> = reports.into_iter().filter(|r| model.is_none_or(|m| r.model == m)).collect();
    match found.len() {
        1 => Ok(found.remove(0)),
        0 => Err(CliError::Data(format!("{}: no report for model {model:?}", path.display()))),
        n => Err(CliError::Usage(format!("{}: {n} reports; choose one with --first-model/--second-model", path.display()))),
    }
}

fn stats(a: StatsArgs) -> Result<(), CliError> {
    let first = pick_report(&a.first, a.first_model.as_deref())?;
    let second = pick_report(&a.second, a.second_model.as_deref())?;
    let describe = |r: &EvalReport| {
        let acc = r.accuracies();
        let normality = dagostino_pearson(&acc).ok();
        json!({
            "model": r.model,
            "samples": acc.len(),
            "mean_accuracy": r.mean_accuracy,
            "normality_statistic": normality.map(|n| n.statistic),
            "normality_p": normality.map(|n| n.p_value),
        })
    };
    let t = students_ttest(&first.accuracies(), &second.accuracies())?;
    let result = json!({
        "first": describe(&first),
        "second": describe(&second),
        "t": t.t,
        "df": t.df,
        "p": t.p_value,
    });
    write_json(a.out.as_deref(), &result)
}

fn project(a: ProjectArgs) -> Result<(), CliError> {
    let model = TrainedModel::load(&a.checkpoint)?;
    let d = load(&a.data)?;
    let (logits, prelogits) = model.scores(&d.edits)?;
    let x: Array2<f64> = match a.layer.as_str() {
        "prelogits" => prelogits,
        "logits" => logits,
        other => return Err(CliError::Usage(format!("unknown layer {other:?} (expected prelogits or logits)"))),
    };
    let cfg = TsneConfig {
        perplexity: a.perplexity,
        iterations: a.iterations,
        seed: seed_of(a.seed)?,
        ..Default::default()
    };
    log::info!("project layer={} tsne={}", a.layer, serde_json::to_string(&cfg)?);
    let y = tsne_project(x.view(), &cfg)?;
    let mut classes = model.classes.clone();
    let mut labels = Vec::with_capacity(d.len());
    for e in &d.edits {
        let i = match classes.iter().position(|c| *c == e.label) {
            Some(i) => i,
            None => {
                classes.push(e.label.clone());
                classes.len() - 1
            }
        };
        labels.push(i);
    }
    let mut out = String::new();
    for (e, p) in d.edits.iter().zip(y.rows()) {
        let record = json!({"id": e.id, "label": e.label, "x": p[0], "y": p[1]});
        let _ = writeln!(out, "{}", serde_json::to_string(&record)?);
    }
    write_text(&a.out, &out)?;
    emit_scatter(y.view(), &labels, &classes, &a.svg)?;
    Ok(())
}

fn gradcheck(a: GradcheckArgs) -> Result<(), CliError> {
    let seed = seed_of(a.seed)?;
    log::info!("gradcheck per_param={} tolerance={} seed={seed}", a.per_param, a.tolerance);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = |l: &[u32], p: &[u32], r: &[u32]| ContextIds {
        left: l.to_vec(),
        path: p.to_vec(),
        right: r.to_vec(),
    };
    let edit = EncodedEdit {
        old: vec![ids(&[2], &[2, 3, 2], &[3, 4]), ids(&[5], &[2, 4], &[3])],
        new: vec![ids(&[3, 4], &[2, 3, 2], &[2]), ids(&[5], &[2, 4], &[3])],
    };
    let mut e2v = Edit2Vec::new(6, 6, 3, DropoutConfig::default(), &mut rng);
    let edit2vec = grad_check_sampled(&mut e2v, a.per_param, seed, |m, backward| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (out, cache) = m.forward(&[&edit], Some(&mut r)).expect("valid micro-instance");
        let (loss, d) = softmax_cross_entropy_batch(out.logits.view(), &[1]);
        if backward {
            m.backward(&cache, d);
        }
        loss
    });

    let tokens = [TokenEdit { old: vec![2, 3, 4], new: vec![2, 4] }, TokenEdit { old: vec![5], new: vec![5, 5, 3] }];
    let refs: Vec<&TokenEdit> = tokens.iter().collect();
    let mut base = LstmBaseline::new(6, 3, DropoutConfig::default().baseline_lstm, &mut rng);
    let lstm = grad_check_sampled(&mut base, a.per_param, seed, |m, backward| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (out, cache) = m.forward(&refs, Some(&mut r)).expect("valid micro-instance");
        let (loss, d) = softmax_cross_entropy_batch(out.logits.view(), &[2, 0]);
        if backward {
            m.backward(&cache, d);
        }
        loss
    });

    let mut failed = Vec::new();
    for (name, report) in [("edit2vec", &edit2vec), ("lstm", &lstm)] {
        println!(
            "{name}: {} entries, max relative error {:.3e}{}",
            report.checked,
            report.max_relative_error,
            report.worst.as_ref().map(|(p, k)| format!(" at {p}[{k}]")).unwrap_or_default()
        );
        if !report.passes(a.tolerance) {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(format!("gradient check above {:e} for {}", a.tolerance, failed.join(", "))))
    }
}
