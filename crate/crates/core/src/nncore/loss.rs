use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

/// Max-shifted softmax.
pub fn softmax(logits: ArrayView1<f64>) -> Array1<f64> {
    let max = logits.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let e = logits.mapv(|v| (v - max).exp());
    let sum = e.sum();
    e / sum
}

/// Cross-entropy of one example and its class probabilities.
///
/// # Panics
/// If there are fewer than two classes or `label` is out of range.
pub fn softmax_cross_entropy(logits: ArrayView1<f64>, label: usize) -> (f64, Array1<f64>) {
    assert!(logits.len() >= 2, "need at least two classes");
    assert!(label < logits.len(), "label {label} out of range");
    let max = logits.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let lse = max + logits.iter().map(|&v| (v - max).exp()).sum::<f64>().ln();
    (lse - logits[label], softmax(logits))
}

/// Mean loss over the rows and its gradient `(p - onehot) / n`.
pub fn softmax_cross_entropy_batch(logits: ArrayView2<f64>, labels: &[usize]) -> (f64, Array2<f64>) {
    let n = labels.len() as f64;
    let mut grad = Array2::zeros(logits.raw_dim());
    let mut total = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        let (loss, mut p) = softmax_cross_entropy(logits.row(i), y);
        total += loss;
        p[y] -= 1.0;
        grad.row_mut(i).assign(&(p / n));
    }
    (total / n, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn uniform_and_overflow() {
        let (l, p) = softmax_cross_entropy(array![0.0, 0.0].view(), 0);
        assert!((l - 2f64.ln()).abs() < 1e-15);
        assert_eq!(p, array![0.5, 0.5]);
        let (l, p) = softmax_cross_entropy(array![1000.0, 0.0].view(), 1);
        assert!(l.is_finite() && (l - 1000.0).abs() < 1e-9);
        assert!((p.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_differences() {
        let z = array![[0.3, -1.2, 2.0], [0.0, 0.5, -0.5]];
        let labels = [2, 0];
        let (_, g) = softmax_cross_entropy_batch(z.view(), &labels);
        let h = 1e-5;
        for i in 0..2 {
            for k in 0..3 {
                let mut zp = z.clone();
                zp[[i, k]] += h;
                let mut zm = z.clone();
                zm[[i, k]] -= h;
                let num = (softmax_cross_entropy_batch(zp.view(), &labels).0
                    - softmax_cross_entropy_batch(zm.view(), &labels).0)
                    / (2.0 * h);
                assert!((num - g[[i, k]]).abs() < 1e-9);
            }
        }
    }
}
