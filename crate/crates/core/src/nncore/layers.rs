use ndarray::{Array2, ArrayView2, Axis, Zip};
use rand::Rng;

use super::array::Parameterized;
use super::{NnError, RealArray};
use crate::pathctx::PAD;

/// Lookup table whose row [`PAD`] stays zero and never receives gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub table: RealArray,
}

impl Embedding {
    pub fn new<R: Rng + ?Sized>(vocab: usize, dim: usize, rng: &mut R) -> Self {
        let mut table = RealArray::uniform(vocab, dim, dim, rng);
        if vocab > 0 {
            table.value.row_mut(PAD as usize).fill(0.0);
        }
        Self { table }
    }

    pub fn vocab(&self) -> usize {
        self.table.shape().0
    }

    pub fn dim(&self) -> usize {
        self.table.shape().1
    }

    pub fn check(&self, ids: &[u32]) -> Result<(), NnError> {
        match ids.iter().find(|&&i| i as usize >= self.vocab()) {
            Some(&id) => Err(NnError::Index { id: id as usize, size: self.vocab() }),
            None => Ok(()),
        }
    }

    /// Gathers one row per id.
    pub fn lookup(&self, ids: &[u32]) -> Result<Array2<f64>, NnError> {
        self.check(ids)?;
        let mut out = Array2::zeros((ids.len(), self.dim()));
        for (mut row, &id) in out.rows_mut().into_iter().zip(ids) {
            if id != PAD {
                row.assign(&self.table.value.row(id as usize));
            }
        }
        Ok(out)
    }

    /// Adds `dout[i]` into the gradient row of `ids[i]`.
    pub fn accumulate(&mut self, ids: &[u32], dout: ArrayView2<f64>) {
        for (row, &id) in dout.rows().into_iter().zip(ids) {
            if id != PAD {
                let mut g = self.table.grad.row_mut(id as usize);
                g += &row;
            }
        }
    }
}

impl Parameterized for Embedding {
    fn params(&self) -> Vec<(String, &RealArray)> {
        vec![("table".into(), &self.table)]
    }

    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
        vec![("table".into(), &mut self.table)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Identity,
    Tanh,
    Relu,
}

impl Activation {
    fn apply(self, z: &mut Array2<f64>) {
        match self {
            Activation::Identity => {}
            Activation::Tanh => z.mapv_inplace(f64::tanh),
            Activation::Relu => z.mapv_inplace(|v| v.max(0.0)),
        }
    }

    /// Turns `dy` into `dz` given the activation output `y`.
    fn backprop(self, y: ArrayView2<f64>, dy: &mut Array2<f64>) {
        match self {
            Activation::Identity => {}
            Activation::Tanh => Zip::from(dy).and(y).for_each(|d, &y| *d *= 1.0 - y * y),
            Activation::Relu => Zip::from(dy).and(y).for_each(|d, &y| {
                if y <= 0.0 {
                    *d = 0.0
                }
            }),
        }
    }
}

/// `activation(x W + b)` on row-stacked inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub w: RealArray,
    pub b: Option<RealArray>,
    pub activation: Activation,
}

impl Dense {
    pub fn new<R: Rng + ?Sized>(input: usize, output: usize, activation: Activation, rng: &mut R) -> Self {
        Self {
            w: RealArray::uniform(input, output, input, rng),
            b: Some(RealArray::zeros(1, output)),
            activation,
        }
    }

    pub fn without_bias<R: Rng + ?Sized>(input: usize, output: usize, activation: Activation, rng: &mut R) -> Self {
        Self {
            b: None,
            ..Self::new(input, output, activation, rng)
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w.shape().0
    }

    pub fn output_dim(&self) -> usize {
        self.w.shape().1
    }

    pub fn forward(&self, x: ArrayView2<f64>) -> Result<Array2<f64>, NnError> {
        if x.ncols() != self.input_dim() {
            return Err(NnError::Shape(format!(
                "dense expects {} inputs, got {}",
                self.input_dim(),
                x.ncols()
            )));
        }
        let mut z = x.dot(&self.w.value);
        if let Some(b) = &self.b {
            z += &b.value.row(0);
        }
        self.activation.apply(&mut z);
        Ok(z)
    }

    /// Accumulates parameter gradients and returns `dL/dx`. `x` and `y`
    /// are the input and output of the matching forward call.
    pub fn backward(&mut self, x: ArrayView2<f64>, y: ArrayView2<f64>, mut dy: Array2<f64>) -> Array2<f64> {
        self.activation.backprop(y, &mut dy);
        ndarray::linalg::general_mat_mul(1.0, &x.t(), &dy, 1.0, &mut self.w.grad);
        if let Some(b) = &mut self.b {
            let mut g = b.grad.row_mut(0);
            g += &dy.sum_axis(Axis(0));
        }
        dy.dot(&self.w.value.t())
    }
}

impl Parameterized for Dense {
    fn params(&self) -> Vec<(String, &RealArray)> {
        let mut v = vec![("w".to_string(), &self.w)];
        if let Some(b) = &self.b {
            v.push(("b".into(), b));
        }
        v
    }

    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
        let mut v = vec![("w".to_string(), &mut self.w)];
        if let Some(b) = &mut self.b {
            v.push(("b".into(), b));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gather_and_pad() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut e = Embedding::new(3, 2, &mut rng);
        e.table.value.row_mut(1).assign(&array![1.0, 2.0]);
        assert_eq!(e.lookup(&[1]).unwrap(), array![[1.0, 2.0]]);
        assert_eq!(e.lookup(&[0]).unwrap(), array![[0.0, 0.0]]);
        assert!(matches!(e.lookup(&[3]), Err(NnError::Index { id: 3, size: 3 })));
        e.accumulate(&[0, 1, 1], array![[5.0, 5.0], [1.0, 1.0], [2.0, 2.0]].view());
        assert_eq!(e.table.grad, array![[0.0, 0.0], [3.0, 3.0], [0.0, 0.0]]);
    }

    #[test]
    fn dense_identity_and_tanh_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut d = Dense::new(2, 2, Activation::Identity, &mut rng);
        d.w.value = Array2::eye(2);
        let x = array![[0.3, -4.0]];
        assert_eq!(d.forward(x.view()).unwrap(), x);
        d.activation = Activation::Tanh;
        assert_eq!(d.forward(array![[0.0, 0.0]].view()).unwrap(), array![[0.0, 0.0]]);
        assert!(matches!(d.forward(array![[1.0]].view()), Err(NnError::Shape(_))));
    }
}
