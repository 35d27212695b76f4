use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dagostino_pearson, students_ttest, stratified_kfold_dataset, EvalError};
use crate::data::{CodeEdit, Dataset};
use crate::models::{ModelSpec, TrainedModel};

/// What one trained fold yields.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub predictions: Vec<usize>,
    pub train_accuracy: Option<f64>,
}

/// Anything that can be fitted on a training split and asked to label a
/// test split.
pub trait ModelFamily: Sync {
    fn name(&self) -> String;

    fn fit_predict(
        &self,
        train: &[CodeEdit],
        train_labels: &[usize],
        test: &[CodeEdit],
        classes: &[String],
        seed: u64,
    ) -> Result<FoldOutcome, EvalError>;
}

impl ModelFamily for ModelSpec {
    fn name(&self) -> String {
        ModelSpec::name(self)
    }

    fn fit_predict(
        &self,
        train: &[CodeEdit],
        train_labels: &[usize],
        test: &[CodeEdit],
        classes: &[String],
        seed: u64,
    ) -> Result<FoldOutcome, EvalError> {
        let model = TrainedModel::train(&self.with_seed(seed), train, train_labels, classes)?;
        Ok(FoldOutcome {
            predictions: model.predict(test)?,
            train_accuracy: model.log.as_ref().map(|l| l.train_accuracy),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossValConfig {
    pub runs: usize,
    pub folds: usize,
    /// Run `r` shuffles its folds and seeds its models with `seed + r`.
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl Default for CrossValConfig {
    fn default() -> Self {
        Self {
            runs: 3,
            folds: 10,
            seed: 0,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model: String,
    pub task: String,
    pub canonicalized: bool,
    pub samples: usize,
    pub config: CrossValConfig,
    /// runs × folds held-out accuracies.
    pub per_run_per_fold_accuracy: Vec<Vec<f64>>,
    pub mean_accuracy: f64,
    /// Mean training-set accuracy over all fits, when the model reports it.
    pub mean_train_accuracy: Option<f64>,
    /// Absent when the accuracies are too few or all equal.
    pub normality_p: Option<f64>,
    /// Two-sided p-value of the t-test against each other model's report.
    pub pairwise_t_p: BTreeMap<String, f64>,
}

impl EvalReport {
    pub fn accuracies(&self) -> Vec<f64> {
        self.per_run_per_fold_accuracy.iter().flatten().copied().collect()
    }
}

/// `runs` repetitions of stratified `folds`-fold cross-validation. Every
/// fit sees only its nine training folds, vocabulary included.
pub fn cross_validate(
    family: &dyn ModelFamily,
    dataset: &Dataset,
    cfg: &CrossValConfig,
    canonicalized: bool,
) -> Result<EvalReport, EvalError> {
    if cfg.runs == 0 {
        return Err(EvalError::Config("at least one run is needed".into()));
    }
    let labels = dataset.labels();
    let classes = dataset.classes();
    let mut jobs = Vec::new();
    for run in 0..cfg.runs {
        let seed = cfg.seed.wrapping_add(run as u64);
        let folds = stratified_kfold_dataset(dataset, cfg.folds, seed)?;
        for f in 0..folds.len() {
            let test = folds[f].clone();
            let train: Vec<usize> = folds.iter().enumerate().filter(|&(g, _)| g != f).flat_map(|(_, v)| v.iter().copied()).collect();
            jobs.push((run, f, seed, train, test));
        }
    }

    let work = |(run, fold, seed, train, test): &(usize, usize, u64, Vec<usize>, Vec<usize>)| {
        let train_labels: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
        let outcome = family.fit_predict(&dataset.subset(train), &train_labels, &dataset.subset(test), &classes, *seed)?;
        if outcome.predictions.len() != test.len() {
            return Err(EvalError::Config(format!(
                "{} predictions for {} test samples",
                outcome.predictions.len(),
                test.len()
            )));
        }
        let correct = outcome.predictions.iter().zip(test).filter(|&(p, &i)| *p == labels[i]).count();
        let accuracy = correct as f64 / test.len() as f64;
        log::info!("{} run {run} fold {fold}: accuracy {accuracy:.4}", family.name());
        Ok((accuracy, outcome.train_accuracy))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| EvalError::Config(e.to_string()))?;
    let results: Vec<(f64, Option<f64>)> = pool.install(|| jobs.par_iter().map(work).collect::<Result<_, EvalError>>())?;

    let per_run_per_fold_accuracy: Vec<Vec<f64>> = results.chunks(cfg.folds).map(|c| c.iter().map(|r| r.0).collect()).collect();
    let all: Vec<f64> = results.iter().map(|r| r.0).collect();
    let mean_accuracy = all.iter().sum::<f64>() / all.len() as f64;
    let train: Vec<f64> = results.iter().filter_map(|r| r.1).collect();
    let mean_train_accuracy = (train.len() == results.len()).then(|| train.iter().sum::<f64>() / train.len() as f64);
    Ok(EvalReport {
        model: family.name(),
        task: dataset.task.as_str().to_string(),
        canonicalized,
        samples: dataset.len(),
        config: *cfg,
        per_run_per_fold_accuracy,
        mean_accuracy,
        mean_train_accuracy,
        normality_p: dagostino_pearson(&all).ok().map(|t| t.p_value),
        pairwise_t_p: BTreeMap::new(),
    })
}

/// Fills every report's `pairwise_t_p` with the t-test p-value against
/// each other report. Pairs whose accuracies are all one identical value
/// are left out.
pub fn pairwise_ttests(reports: &mut [EvalReport]) {
    let samples: Vec<(String, Vec<f64>)> = reports.iter().map(|r| (r.model.clone(), r.accuracies())).collect();
    for (i, report) in reports.iter_mut().enumerate() {
        report.pairwise_t_p.clear();
        for (j, (name, other)) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Ok(t) = students_ttest(&samples[i].1, other) {
                report.pairwise_t_p.insert(name.clone(), t.p_value);
            }
        }
    }
}
