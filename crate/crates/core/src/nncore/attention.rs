use std::ops::Range;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;

use super::array::{prefixed, prefixed_mut, Parameterized};
use super::layers::{Activation, Dense};
use super::{NnError, RealArray};

pub const SCORE_HIDDEN: usize = 128;

/// Scores every item with `relu(x W1 + b1) w2`, normalises the scores of
/// each group with a softmax and returns the weighted sum of the group.
#[derive(Debug, Clone, PartialEq)]
pub struct Attention {
    pub hidden: Dense,
    pub score: RealArray,
}

#[derive(Debug, Clone)]
pub struct AttentionCache {
    items: Array2<f64>,
    hidden: Array2<f64>,
    pub weights: Array1<f64>,
    groups: Vec<Range<usize>>,
}

impl Attention {
    pub fn new<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        Self {
            hidden: Dense::new(dim, SCORE_HIDDEN, Activation::Relu, rng),
            score: RealArray::uniform(SCORE_HIDDEN, 1, SCORE_HIDDEN, rng),
        }
    }

    /// `items` holds the rows of all groups back to back; each range in
    /// `groups` selects one group. Returns one pooled row per group.
    pub fn forward(&self, items: Array2<f64>, groups: &[Range<usize>]) -> Result<(Array2<f64>, AttentionCache), NnError> {
        if groups.iter().any(|g| g.is_empty()) {
            return Err(NnError::AllMasked);
        }
        let hidden = self.hidden.forward(items.view())?;
        let scores = hidden.dot(&self.score.value).remove_axis(Axis(1));
        let mut weights = Array1::zeros(items.nrows());
        let mut pooled = Array2::zeros((groups.len(), items.ncols()));
        for (gi, g) in groups.iter().enumerate() {
            let s = scores.slice(ndarray::s![g.clone()]);
            let max = s.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
            let e = s.mapv(|v| (v - max).exp());
            let w = &e / e.sum();
            let mut p = pooled.row_mut(gi);
            for (k, i) in g.clone().enumerate() {
                p.scaled_add(w[k], &items.row(i));
            }
            weights.slice_mut(ndarray::s![g.clone()]).assign(&w);
        }
        let cache = AttentionCache {
            items,
            hidden,
            weights,
            groups: groups.to_vec(),
        };
        Ok((pooled, cache))
    }

    pub fn backward(&mut self, cache: &AttentionCache, d_pooled: ArrayView2<f64>) -> Array2<f64> {
        let items = &cache.items;
        let a = &cache.weights;
        let mut dx = Array2::zeros(items.raw_dim());
        let mut ds = Array1::<f64>::zeros(items.nrows());
        for (gi, g) in cache.groups.iter().enumerate() {
            let dp = d_pooled.row(gi);
            let mut avg = 0.0;
            for i in g.clone() {
                dx.row_mut(i).scaled_add(a[i], &dp);
                ds[i] = items.row(i).dot(&dp);
                avg += a[i] * ds[i];
            }
            for i in g.clone() {
                ds[i] = a[i] * (ds[i] - avg);
            }
        }
        let ds = ds.insert_axis(Axis(1));
        ndarray::linalg::general_mat_mul(1.0, &cache.hidden.t(), &ds, 1.0, &mut self.score.grad);
        let d_hidden = ds.dot(&self.score.value.t());
        dx += &self.hidden.backward(items.view(), cache.hidden.view(), d_hidden);
        dx
    }
}

impl Parameterized for Attention {
    fn params(&self) -> Vec<(String, &RealArray)> {
        let mut v = prefixed("hidden", self.hidden.params());
        v.push(("score".into(), &self.score));
        v
    }

    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
        let mut v = prefixed_mut("hidden", self.hidden.params_mut());
        v.push(("score".into(), &mut self.score));
        v
    }
}

/// Pools the unmasked rows of `items`; masked rows get weight exactly 0
/// and take no part in the computation.
pub fn attention_pool(
    items: ArrayView2<f64>,
    mask: &[bool],
    attention: &Attention,
) -> Result<(Array1<f64>, Array1<f64>), NnError> {
    if mask.len() != items.nrows() {
        return Err(NnError::Shape(format!("{} items but {} mask entries", items.nrows(), mask.len())));
    }
    let live: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    if live.is_empty() {
        return Err(NnError::AllMasked);
    }
    let (pooled, cache) = attention.forward(items.select(Axis(0), &live), &[0..live.len()])?;
    let mut weights = Array1::zeros(mask.len());
    for (k, &i) in live.iter().enumerate() {
        weights[i] = cache.weights[k];
    }
    Ok((pooled.row(0).to_owned(), weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_and_identical_items() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let att = Attention::new(3, &mut rng);
        let x = array![[0.1, -0.2, 0.3], [9.0, 9.0, 9.0]];
        let (p, w) = attention_pool(x.view(), &[true, false], &att).unwrap();
        assert_eq!(w, array![1.0, 0.0]);
        assert_eq!(p, x.row(0));
        let twin = array![[0.1, -0.2, 0.3], [0.1, -0.2, 0.3]];
        let (_, w) = attention_pool(twin.view(), &[true, true], &att).unwrap();
        assert_eq!(w, array![0.5, 0.5]);
        assert!(matches!(attention_pool(x.view(), &[false, false], &att), Err(NnError::AllMasked)));
    }

    #[test]
    fn padding_is_bit_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let att = Attention::new(8, &mut rng);
        let real = Array2::from_shape_fn((5, 8), |_| rng.random_range(-1.0..1.0));
        let mut padded = Array2::zeros((40, 8));
        padded.slice_mut(ndarray::s![..5, ..]).assign(&real);
        let mask: Vec<bool> = (0..40).map(|i| i < 5).collect();
        let (a, wa) = attention_pool(real.view(), &[true; 5], &att).unwrap();
        let (b, wb) = attention_pool(padded.view(), &mask, &att).unwrap();
        assert_eq!(a, b);
        assert_eq!(wa.as_slice().unwrap(), &wb.as_slice().unwrap()[..5]);
        assert!(wb.iter().skip(5).all(|&w| w == 0.0));
        assert!((wb.sum() - 1.0).abs() < 1e-12);
    }
}
