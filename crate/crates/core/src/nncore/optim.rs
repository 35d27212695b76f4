use ndarray::{Array2, Zip};
use serde::{Deserialize, Serialize};

use super::{NnError, RealArray};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Array2<f64>,
    pub v: Array2<f64>,
}

impl AdamState {
    pub fn for_shape(shape: (usize, usize)) -> Self {
        Self {
            m: Array2::zeros(shape),
            v: Array2::zeros(shape),
        }
    }
}

/// One bias-corrected Adam update; `t` counts steps from 1.
pub fn adam_step(
    param: &mut Array2<f64>,
    grad: &Array2<f64>,
    state: &mut AdamState,
    config: &AdamConfig,
    t: u64,
) -> Result<(), NnError> {
    if param.dim() != grad.dim() || param.dim() != state.m.dim() {
        return Err(NnError::Shape(format!(
            "adam: parameter {:?}, gradient {:?}, state {:?}",
            param.dim(),
            grad.dim(),
            state.m.dim()
        )));
    }
    let AdamConfig {
        learning_rate,
        beta1,
        beta2,
        epsilon,
    } = *config;
    let c1 = 1.0 - beta1.powi(t as i32);
    let c2 = 1.0 - beta2.powi(t as i32);
    Zip::from(param)
        .and(grad)
        .and(&mut state.m)
        .and(&mut state.v)
        .for_each(|p, &g, m, v| {
            *m = beta1 * *m + (1.0 - beta1) * g;
            *v = beta2 * *v + (1.0 - beta2) * g * g;
            *p -= learning_rate * (*m / c1) / ((*v / c2).sqrt() + epsilon);
        });
    Ok(())
}

/// Adam over a fixed, ordered parameter list.
#[derive(Debug, Clone, Default)]
pub struct Adam {
    pub config: AdamConfig,
    pub t: u64,
    states: Vec<AdamState>,
}

impl Adam {
    pub fn new(config: AdamConfig) -> Self {
        Self {
            config,
            t: 0,
            states: Vec::new(),
        }
    }

    pub fn step(&mut self, params: Vec<&mut RealArray>) -> Result<(), NnError> {
        if self.states.is_empty() {
            self.states = params.iter().map(|p| AdamState::for_shape(p.shape())).collect();
        }
        if self.states.len() != params.len() {
            return Err(NnError::Shape("parameter list changed between steps".into()));
        }
        self.t += 1;
        for (p, s) in params.into_iter().zip(&mut self.states) {
            adam_step(&mut p.value, &p.grad, s, &self.config, self.t)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn zero_gradient_leaves_parameters() {
        let mut p = array![[1.0, -2.0]];
        let g = Array2::zeros((1, 2));
        let mut s = AdamState::for_shape((1, 2));
        adam_step(&mut p, &g, &mut s, &AdamConfig::default(), 1).unwrap();
        assert_eq!(p, array![[1.0, -2.0]]);
    }

    #[test]
    fn descends_a_quadratic() {
        let cfg = AdamConfig {
            learning_rate: 0.1,
            ..Default::default()
        };
        let mut w = array![[1.0]];
        let mut s = AdamState::for_shape((1, 1));
        let g = 2.0 * &w;
        adam_step(&mut w, &g, &mut s, &cfg, 1).unwrap();
        assert!(w[[0, 0]] < 1.0);

        // f(x, y) = x^2 + 3 y^2
        let mut p = array![[2.0, -1.5]];
        let mut s = AdamState::for_shape((1, 2));
        let grad = |p: &Array2<f64>| array![[2.0 * p[[0, 0]], 6.0 * p[[0, 1]]]];
        for t in 1..=200 {
            let g = grad(&p);
            adam_step(&mut p, &g, &mut s, &cfg, t).unwrap();
        }
        let g = grad(&p);
        assert!(g.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-3, "{g}");
    }

    #[test]
    fn shape_mismatch() {
        let mut p = Array2::zeros((2, 2));
        let mut s = AdamState::for_shape((2, 2));
        let r = adam_step(&mut p, &Array2::zeros((1, 2)), &mut s, &AdamConfig::default(), 1);
        assert!(matches!(r, Err(NnError::Shape(_))));
    }
}
