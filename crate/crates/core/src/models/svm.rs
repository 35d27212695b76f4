use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::network::{argmax_rows, stream};
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Linear,
    Rbf,
}

impl std::str::FromStr for Kernel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" => Ok(Self::Linear),
            "rbf" => Ok(Self::Rbf),
            _ => Err(format!("unknown kernel {s:?} (expected linear or rbf)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmConfig {
    pub kernel: Kernel,
    pub c: f64,
    /// RBF width; `None` means `1 / feature_dim`.
    pub gamma: Option<f64>,
    pub epochs: usize,
    pub rff_dim: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            kernel: Kernel::Linear,
            c: 1.0,
            gamma: None,
            epochs: 30,
            rff_dim: 512,
            seed: 0,
        }
    }
}

/// Random Fourier features `sqrt(2/D) cos(x W + b)` approximating
/// `exp(-gamma |x - y|^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierFeatures {
    pub w: Array2<f64>,
    pub b: Array1<f64>,
}

impl FourierFeatures {
    pub fn new<R: Rng + ?Sized>(input_dim: usize, dim: usize, gamma: f64, rng: &mut R) -> Self {
        let normal = Normal::new(0.0, (2.0 * gamma).sqrt()).expect("positive gamma");
        let w = Array2::from_shape_simple_fn((input_dim, dim), || normal.sample(rng));
        let b = Array1::from_shape_simple_fn(dim, || rng.random_range(0.0..std::f64::consts::TAU));
        Self { w, b }
    }

    pub fn map(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let scale = (2.0 / self.b.len() as f64).sqrt();
        let mut z = x.dot(&self.w);
        z += &self.b;
        z.mapv_inplace(|v| scale * v.cos());
        z
    }
}

/// One-vs-rest linear SVM; each row of `weights` holds a class's
/// weights followed by its bias.
#[derive(Debug, Clone, PartialEq)]
pub struct Svm {
    pub weights: Array2<f64>,
    pub features: Option<FourierFeatures>,
}

/// Pegasos hinge-loss subgradient descent with `lambda = 1 / (C N)`; the
/// bias is learned as the weight of a constant feature.
pub fn svm_train(x: ArrayView2<f64>, labels: &[usize], num_classes: usize, config: &SvmConfig) -> Result<Svm, ModelError> {
    let n = labels.len();
    if x.nrows() != n {
        return Err(ModelError::Config(format!("{} feature rows for {n} labels", x.nrows())));
    }
    let mut counts = vec![0usize; num_classes.max(2)];
    for &y in labels {
        if y >= counts.len() {
            return Err(ModelError::Config(format!("label {y} out of range")));
        }
        counts[y] += 1;
    }
    if let Some((class, &count)) = counts.iter().enumerate().find(|(_, &c)| c < 2) {
        return Err(ModelError::DegenerateLabels { class, count });
    }
    if !(config.c > 0.0) || config.epochs == 0 {
        return Err(ModelError::Config("C and epochs must be positive".into()));
    }
    let features = match config.kernel {
        Kernel::Linear => None,
        Kernel::Rbf => {
            let gamma = config.gamma.unwrap_or(1.0 / x.ncols().max(1) as f64);
            let mut rng = stream(config.seed, 1);
            Some(FourierFeatures::new(x.ncols(), config.rff_dim, gamma, &mut rng))
        }
    };
    let mapped = features.as_ref().map(|f| f.map(x));
    let x = match &mapped {
        Some(m) => m.view(),
        None => x.view(),
    };
    let d = x.ncols() + 1;
    let lambda = 1.0 / (config.c * n as f64);
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = stream(config.seed, 2);
    let mut schedule = Vec::with_capacity(config.epochs * n);
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        schedule.extend_from_slice(&order);
    }
    let mut weights = Array2::zeros((num_classes, d));
    for (class, mut w) in weights.axis_iter_mut(Axis(0)).enumerate() {
        // w = scale * v, so the shrink step is O(1)
        let mut v = vec![0.0; d];
        let mut scale = 1.0;
        for (step, &i) in schedule.iter().enumerate() {
            let t = (step + 1) as f64;
            let y = if labels[i] == class { 1.0 } else { -1.0 };
            let row = x.row(i);
            let margin = scale * (row.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() + v[d - 1]);
            scale *= 1.0 - 1.0 / t;
            if scale == 0.0 {
                v.fill(0.0);
                scale = 1.0 / t;
            }
            if y * margin < 1.0 {
                let eta = 1.0 / (lambda * t);
                let step = eta * y / scale;
                for (vj, &xj) in v.iter_mut().zip(row.iter()) {
                    *vj += step * xj;
                }
                v[d - 1] += step;
            }
        }
        for (wj, vj) in w.iter_mut().zip(&v) {
            *wj = scale * vj;
        }
    }
    Ok(Svm { weights, features })
}

impl Svm {
    pub fn decision(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mapped = self.features.as_ref().map(|f| f.map(x));
        let x = match &mapped {
            Some(m) => m.view(),
            None => x.view(),
        };
        let d = self.weights.ncols() - 1;
        let mut s = x.dot(&self.weights.slice(ndarray::s![.., ..d]).t());
        s += &self.weights.column(d);
        s
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<usize> {
        argmax_rows(self.decision(x).view())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separable_toy() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut x = Array2::zeros((100, 2));
        let mut y = Vec::new();
        for i in 0..100 {
            let class = i % 2;
            let cx = if class == 0 { -2.0 } else { 2.0 };
            x[[i, 0]] = cx + rng.random_range(-1.0..1.0);
            x[[i, 1]] = rng.random_range(-3.0..3.0);
            y.push(class);
        }
        for kernel in [Kernel::Linear, Kernel::Rbf] {
            let cfg = SvmConfig {
                kernel,
                gamma: Some(0.5),
                ..Default::default()
            };
            let svm = svm_train(x.view(), &y, 2, &cfg).unwrap();
            assert_eq!(svm.predict(x.view()), y, "{kernel:?}");
        }
    }

    #[test]
    fn degenerate_labels() {
        let x = Array2::zeros((4, 2));
        let r = svm_train(x.view(), &[0, 0, 0, 0], 2, &SvmConfig::default());
        assert!(matches!(r, Err(ModelError::DegenerateLabels { class: 1, count: 0 })));
        let r = svm_train(x.view(), &[0, 0, 0, 1], 2, &SvmConfig::default());
        assert!(matches!(r, Err(ModelError::DegenerateLabels { class: 1, count: 1 })));
    }

    #[test]
    fn fourier_features_approximate_the_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let dim = 5;
        let gamma = 1.0 / dim as f64;
        let f = FourierFeatures::new(dim, 512, gamma, &mut rng);
        let mut total = 0.0;
        for _ in 0..1000 {
            let a = Array2::from_shape_simple_fn((2, dim), || rng.random_range(-1.0..1.0));
            let z = f.map(a.view());
            let approx = z.row(0).dot(&z.row(1));
            let diff = &a.row(0) - &a.row(1);
            let exact = (-gamma * diff.dot(&diff)).exp();
            total += (approx - exact).abs();
        }
        assert!(total / 1000.0 < 0.05, "{}", total / 1000.0);
    }
}
