use ndarray::{Array2, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub iterations: usize,
    pub early_exaggeration: f64,
    pub exaggeration_iterations: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            iterations: 1000,
            early_exaggeration: 12.0,
            exaggeration_iterations: 250,
            learning_rate: 200.0,
            seed: 0,
        }
    }
}

const ENTROPY_TOLERANCE: f64 = 1e-5;
const SEARCH_STEPS: usize = 50;
const MIN_GAIN: f64 = 0.01;
const MIN_PROBABILITY: f64 = 1e-12;

fn squared_distances(x: ArrayView2<f64>) -> Array2<f64> {
    let n = x.nrows();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = x.row(i).iter().zip(x.row(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            d[[i, j]] = v;
            d[[j, i]] = v;
        }
    }
    d
}

fn check_perplexity(n: usize, perplexity: f64) -> Result<(), EvalError> {
    if !(perplexity > 0.0) {
        return Err(EvalError::Config(format!("perplexity must be positive, got {perplexity}")));
    }
    if n < 2 || perplexity >= (n as f64 - 1.0) / 3.0 {
        return Err(EvalError::PerplexityTooLarge { perplexity, points: n });
    }
    Ok(())
}

/// Row-stochastic Gaussian affinities p(j|i), each row calibrated by
/// bisection on the precision so that its perplexity matches the target.
pub fn conditional_affinities(x: ArrayView2<f64>, perplexity: f64) -> Result<Array2<f64>, EvalError> {
    let n = x.nrows();
    check_perplexity(n, perplexity)?;
    let d = squared_distances(x);
    let target = perplexity.ln();
    let mut p = Array2::zeros((n, n));
    let mut row = vec![0.0; n];
    for i in 0..n {
        let nearest = (0..n).filter(|&j| j != i).map(|j| d[[i, j]]).fold(f64::INFINITY, f64::min);
        let (mut beta, mut lo, mut hi) = (1.0, f64::NEG_INFINITY, f64::INFINITY);
        for _ in 0..SEARCH_STEPS {
            let mut sum = 0.0;
            let mut weighted = 0.0;
            for j in 0..n {
                row[j] = if j == i { 0.0 } else { (-(d[[i, j]] - nearest) * beta).exp() };
                sum += row[j];
                weighted += (d[[i, j]] - nearest) * row[j];
            }
            let entropy = sum.ln() + beta * weighted / sum;
            for v in row.iter_mut() {
                *v /= sum;
            }
            let gap = entropy - target;
            if gap.abs() < ENTROPY_TOLERANCE {
                break;
            }
            if gap > 0.0 {
                lo = beta;
                beta = if hi.is_finite() { (beta + hi) / 2.0 } else { beta * 2.0 };
            } else {
                hi = beta;
                beta = if lo.is_finite() { (beta + lo) / 2.0 } else { beta / 2.0 };
            }
        }
        p.row_mut(i).assign(&ndarray::ArrayView1::from(&row));
    }
    Ok(p)
}

/// Symmetrized joint affinities (P + Pᵀ) / 2N, floored away from zero.
pub fn joint_affinities(conditional: ArrayView2<f64>) -> Array2<f64> {
    let n = conditional.nrows() as f64;
    let mut p = (&conditional + &conditional.t()) / (2.0 * n);
    p.mapv_inplace(|v| v.max(MIN_PROBABILITY));
    p
}

/// Exact t-SNE to two dimensions.
pub fn tsne_project(x: ArrayView2<f64>, cfg: &TsneConfig) -> Result<Array2<f64>, EvalError> {
    let n = x.nrows();
    check_perplexity(n, cfg.perplexity)?;
    let p = joint_affinities(conditional_affinities(x, cfg.perplexity)?.view());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let normal = Normal::new(0.0, 1e-4).expect("valid normal");
    let mut y = Array2::from_shape_simple_fn((n, 2), || normal.sample(&mut rng));
    let mut update = Array2::<f64>::zeros((n, 2));
    let mut gains = Array2::<f64>::ones((n, 2));
    let mut num = Array2::<f64>::zeros((n, n));
    let mut grad = Array2::<f64>::zeros((n, 2));

    for iter in 0..cfg.iterations {
        let early = iter < cfg.exaggeration_iterations;
        let exaggeration = if early { cfg.early_exaggeration } else { 1.0 };
        let momentum = if early { 0.5 } else { 0.8 };
        let mut total = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let dy0 = y[[i, 0]] - y[[j, 0]];
                let dy1 = y[[i, 1]] - y[[j, 1]];
                let v = 1.0 / (1.0 + dy0 * dy0 + dy1 * dy1);
                num[[i, j]] = v;
                num[[j, i]] = v;
                total += 2.0 * v;
            }
        }
        grad.fill(0.0);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let q = (num[[i, j]] / total).max(MIN_PROBABILITY);
                let m = 4.0 * (exaggeration * p[[i, j]] - q) * num[[i, j]];
                grad[[i, 0]] += m * (y[[i, 0]] - y[[j, 0]]);
                grad[[i, 1]] += m * (y[[i, 1]] - y[[j, 1]]);
            }
        }
        for ((g, u), gain) in grad.iter().zip(update.iter_mut()).zip(gains.iter_mut()) {
            *gain = if *g * *u < 0.0 { *gain + 0.2 } else { *gain * 0.8 };
            *gain = gain.max(MIN_GAIN);
            *u = momentum * *u - cfg.learning_rate * *gain * g;
        }
        y += &update;
        let centre = y.mean_axis(Axis(0)).expect("non-empty");
        y -= &centre;
    }
    Ok(y)
}
