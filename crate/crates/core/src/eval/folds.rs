use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::EvalError;
use crate::data::Dataset;

/// Splits sample indices into `k` disjoint folds with per-class counts
/// differing by at most one between folds.
///
/// Each class is shuffled and dealt round-robin. The dealer position
/// carries over from one class to the next, so fold sizes stay balanced
/// too. Folds are returned sorted.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    if k < 2 {
        return Err(EvalError::Config(format!("need at least 2 folds, got {k}")));
    }
    let classes = labels.iter().max().map_or(0, |&m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, &y) in labels.iter().enumerate() {
        members[y].push(i);
    }
    for (class, m) in members.iter().enumerate() {
        if !m.is_empty() && m.len() < k {
            return Err(EvalError::ClassTooSmall {
                class: class.to_string(),
                count: m.len(),
                folds: k,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut dealer = 0;
    for mut m in members {
        m.shuffle(&mut rng);
        for i in m {
            folds[dealer].push(i);
            dealer = (dealer + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// [`stratified_kfold`] over a dataset's labels, reporting class names.
pub fn stratified_kfold_dataset(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    let classes = dataset.classes();
    stratified_kfold(&dataset.labels(), k, seed).map_err(|e| match e {
        EvalError::ClassTooSmall { class, count, folds } => EvalError::ClassTooSmall {
            class: class.parse::<usize>().map(|i| classes[i].clone()).unwrap_or(class),
            count,
            folds,
        },
        other => other,
    })
}
