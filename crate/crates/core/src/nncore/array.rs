use ndarray::Array2;
use rand::Rng;

use super::NnError;

/// A trainable 2-D array with a same-shape gradient accumulator. Vectors
/// are stored as a single row.
#[derive(Debug, Clone, PartialEq)]
pub struct RealArray {
    pub value: Array2<f64>,
    pub grad: Array2<f64>,
}

impl RealArray {
    pub fn new(value: Array2<f64>) -> Self {
        let grad = Array2::zeros(value.raw_dim());
        Self { value, grad }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(Array2::zeros((rows, cols)))
    }

    /// Uniform in `[-1/sqrt(fan_in), 1/sqrt(fan_in)]`.
    pub fn uniform<R: Rng + ?Sized>(rows: usize, cols: usize, fan_in: usize, rng: &mut R) -> Self {
        let a = 1.0 / (fan_in.max(1) as f64).sqrt();
        Self::new(Array2::from_shape_simple_fn((rows, cols), || rng.random_range(-a..=a)))
    }

    pub fn shape(&self) -> (usize, usize) {
        self.value.dim()
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub fn zero_grad(&mut self) {
        self.grad.fill(0.0);
    }
}

/// Anything owning named [`RealArray`]s.
pub trait Parameterized {
    fn params(&self) -> Vec<(String, &RealArray)>;
    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)>;

    fn zero_grad(&mut self) {
        for (_, p) in self.params_mut() {
            p.zero_grad();
        }
    }

    fn param_count(&self) -> usize {
        self.params().iter().map(|(_, p)| p.len()).sum()
    }

    /// Replaces every parameter value by the array of the same name.
    fn load_arrays(&mut self, arrays: &[(String, Array2<f64>)]) -> Result<(), NnError> {
        for (name, p) in self.params_mut() {
            let (_, a) = arrays
                .iter()
                .find(|(n, _)| *n == name)
                .ok_or_else(|| NnError::Checkpoint(format!("missing array {name}")))?;
            if a.dim() != p.shape() {
                return Err(NnError::Shape(format!("{name}: expected {:?}, found {:?}", p.shape(), a.dim())));
            }
            p.value.assign(a);
        }
        Ok(())
    }
}

pub fn prefixed<'a>(prefix: &str, items: Vec<(String, &'a RealArray)>) -> Vec<(String, &'a RealArray)> {
    items.into_iter().map(|(n, p)| (format!("{prefix}.{n}"), p)).collect()
}

pub fn prefixed_mut<'a>(
    prefix: &str,
    items: Vec<(String, &'a mut RealArray)>,
) -> Vec<(String, &'a mut RealArray)> {
    items.into_iter().map(|(n, p)| (format!("{prefix}.{n}"), p)).collect()
}
