use ndarray::Array2;
use rand::Rng;

/// Inverted dropout. In training mode each entry is zeroed with
/// probability `rate` and survivors are scaled by `1 / (1 - rate)`; the
/// returned mask holds those factors for the backward pass. Outside
/// training, or at rate 0, the input passes through unchanged.
pub fn dropout_apply<R: Rng + ?Sized>(
    x: Array2<f64>,
    rate: f64,
    rng: &mut R,
    training: bool,
) -> (Array2<f64>, Option<Array2<f64>>) {
    if !training || rate == 0.0 {
        return (x, None);
    }
    let keep = 1.0 / (1.0 - rate);
    let mask = Array2::from_shape_simple_fn(x.raw_dim(), || if rng.random::<f64>() < rate { 0.0 } else { keep });
    (x * &mask, Some(mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = Array2::from_elem((3, 3), 2.5);
        assert_eq!(dropout_apply(x.clone(), 0.0, &mut rng, true).0, x);
        assert_eq!(dropout_apply(x.clone(), 0.6, &mut rng, false).0, x);
    }

    #[test]
    fn keep_fraction_and_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for rate in [0.2, 0.4, 0.6, 0.8] {
            let x = Array2::from_elem((100, 1000), 1.0);
            let (y, _) = dropout_apply(x, rate, &mut rng, true);
            let kept = y.iter().filter(|&&v| v != 0.0).count() as f64 / 1e5;
            assert!((kept - (1.0 - rate)).abs() < 0.02, "rate {rate}: kept {kept}");
            assert!((y.mean().unwrap() - 1.0).abs() < 0.02);
        }
    }
}
