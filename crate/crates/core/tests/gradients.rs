//! Central-difference checks of every hand-written backward pass.

use editvec::nncore::*;
use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.random_range(-1.0..1.0))
}

/// A layer plus its input, both treated as parameters so that input
/// gradients are checked as well.
struct Probe<L> {
    layer: L,
    inputs: Vec<RealArray>,
    /// Fixed random weights turning the output into a scalar loss.
    readout: Array2<f64>,
}

impl<L: Parameterized> Parameterized for Probe<L> {
    fn params(&self) -> Vec<(String, &RealArray)> {
        let mut v = self.layer.params();
        v.extend(self.inputs.iter().enumerate().map(|(i, p)| (format!("input{i}"), p)));
        v
    }

    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
        let mut v = self.layer.params_mut();
        v.extend(self.inputs.iter_mut().enumerate().map(|(i, p)| (format!("input{i}"), p)));
        v
    }
}

fn readout_loss(out: ArrayView2<f64>, r: &Array2<f64>) -> f64 {
    (&out * r).sum()
}

#[test]
fn dense_layers() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for act in [Activation::Identity, Activation::Tanh, Activation::Relu] {
        let mut probe = Probe {
            layer: Dense::new(4, 3, act, &mut rng),
            inputs: vec![RealArray::new(random(5, 4, &mut rng))],
            readout: random(5, 3, &mut rng),
        };
        let report = grad_check(&mut probe, |p, backward| {
            let x = p.inputs[0].value.clone();
            let y = p.layer.forward(x.view()).unwrap();
            let loss = readout_loss(y.view(), &p.readout);
            if backward {
                let dx = p.layer.backward(x.view(), y.view(), p.readout.clone());
                p.inputs[0].grad += &dx;
            }
            loss
        });
        assert!(report.passes(GRAD_CHECK_TOLERANCE), "{act:?}: {report:?}");
    }
}

#[test]
fn embedding_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut emb = Embedding::new(6, 3, &mut rng);
    let ids = [1u32, 4, 4, 0, 5];
    let report = grad_check(&mut emb, |e, backward| {
        let y = e.lookup(&ids).unwrap();
        if backward {
            e.accumulate(&ids, Array2::ones(y.raw_dim()).view());
        }
        y.sum()
    });
    assert!(report.max_relative_error < 1e-6, "{report:?}");
    assert!(emb.table.grad.row(0).iter().all(|&g| g == 0.0));
}

fn check_lstm(bidirectional: bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let lengths = [3usize, 1, 2, 3];
    let inputs: Vec<RealArray> = lengths.iter().map(|&t| RealArray::new(random(t, 4, &mut rng))).collect();
    if bidirectional {
        let mut probe = Probe {
            layer: BiLstm::new(4, 3, &mut rng),
            inputs,
            readout: random(lengths.len(), 6, &mut rng),
        };
        let report = grad_check(&mut probe, |p, backward| {
            let xs: Vec<_> = p.inputs.iter().map(|x| x.value.view()).collect();
            let (out, cache) = p.layer.run(&xs).unwrap();
            let loss = readout_loss(out.view(), &p.readout);
            if backward {
                let dxs = p.layer.backprop(&cache, p.readout.view());
                for (x, dx) in p.inputs.iter_mut().zip(dxs) {
                    x.grad += &dx;
                }
            }
            loss
        });
        assert!(report.passes(GRAD_CHECK_TOLERANCE), "bilstm: {report:?}");
    } else {
        let mut probe = Probe {
            layer: Lstm::new(4, 5, &mut rng),
            inputs,
            readout: random(lengths.len(), 5, &mut rng),
        };
        let report = grad_check(&mut probe, |p, backward| {
            let xs: Vec<_> = p.inputs.iter().map(|x| x.value.view()).collect();
            let (out, cache) = p.layer.forward(&xs).unwrap();
            let loss = readout_loss(out.view(), &p.readout);
            if backward {
                let dxs = p.layer.backward(&cache, p.readout.view());
                for (x, dx) in p.inputs.iter_mut().zip(dxs) {
                    x.grad += &dx;
                }
            }
            loss
        });
        assert!(report.passes(GRAD_CHECK_TOLERANCE), "lstm: {report:?}");
    }
}

#[test]
fn lstm() {
    check_lstm(false);
}

#[test]
fn bilstm() {
    check_lstm(true);
}

#[test]
fn attention_pooling() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut probe = Probe {
        layer: Attention::new(4, &mut rng),
        inputs: vec![RealArray::new(random(6, 4, &mut rng))],
        readout: random(3, 4, &mut rng),
    };
    let groups = [0..1, 1..4, 4..6];
    let report = grad_check(&mut probe, |p, backward| {
        let (pooled, cache) = p.layer.forward(p.inputs[0].value.clone(), &groups).unwrap();
        let loss = readout_loss(pooled.view(), &p.readout);
        if backward {
            let dx = p.layer.backward(&cache, p.readout.view());
            p.inputs[0].grad += &dx;
        }
        loss
    });
    assert!(report.passes(GRAD_CHECK_TOLERANCE), "{report:?}");
}

#[test]
fn softmax_cross_entropy_logits() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    struct Logits(RealArray);
    impl Parameterized for Logits {
        fn params(&self) -> Vec<(String, &RealArray)> {
            vec![("z".into(), &self.0)]
        }
        fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
            vec![("z".into(), &mut self.0)]
        }
    }
    let mut z = Logits(RealArray::new(3.0 * random(4, 5, &mut rng)));
    let labels = [0, 4, 2, 2];
    let report = grad_check(&mut z, |z, backward| {
        let (loss, g) = softmax_cross_entropy_batch(z.0.value.view(), &labels);
        if backward {
            z.0.grad += &g;
        }
        loss
    });
    assert!(report.passes(GRAD_CHECK_TOLERANCE), "{report:?}");
}

#[test]
fn probabilities_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let z = 20.0 * random(1, 11, &mut rng);
        let p = softmax(z.row(0));
        assert!((p.sum() - 1.0).abs() < 1e-12);
    }
}
