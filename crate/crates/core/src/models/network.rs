use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::nncore::{dropout_apply, softmax_cross_entropy_batch, Adam, NnError, Parameterized, TrainConfig};

/// Per-side encodings of one edit.
#[derive(Debug, Clone, PartialEq)]
pub struct EditEmbedding {
    pub r_old: Array1<f64>,
    pub r_new: Array1<f64>,
    pub attention_old: Option<Array1<f64>>,
    pub attention_new: Option<Array1<f64>>,
}

pub(crate) fn maybe_dropout(
    x: Array2<f64>,
    rate: f64,
    rng: &mut Option<&mut ChaCha8Rng>,
) -> (Array2<f64>, Option<Array2<f64>>) {
    match rng {
        Some(r) => dropout_apply(x, rate, &mut **r, true),
        None => (x, None),
    }
}

pub(crate) fn apply_mask(x: Array2<f64>, mask: &Option<Array2<f64>>) -> Array2<f64> {
    match mask {
        Some(m) => x * m,
        None => x,
    }
}

/// Sums row `i` of `rows` into output row `index[i]`.
pub(crate) fn scatter_rows(rows: ArrayView2<f64>, index: &[usize], n: usize) -> Array2<f64> {
    let mut out = Array2::zeros((n, rows.ncols()));
    for (row, &i) in rows.rows().into_iter().zip(index) {
        let mut o = out.row_mut(i);
        o += &row;
    }
    out
}

/// A trainable classifier over some encoded input.
pub trait Network: Parameterized {
    type Input: Sync;

    /// Training-mode forward and backward pass; returns the mean loss and
    /// leaves the gradients accumulated.
    fn train_batch(&mut self, batch: &[&Self::Input], labels: &[usize], rng: &mut ChaCha8Rng) -> Result<f64, NnError>;

    /// Inference-mode logits and the activations feeding the output layer.
    fn infer(&self, batch: &[&Self::Input]) -> Result<(Array2<f64>, Array2<f64>), NnError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingLog {
    /// Inference-mode mean loss before the first update; absent for
    /// models without a loss.
    pub initial_loss: Option<f64>,
    /// Inference-mode mean loss after the first epoch.
    pub first_epoch_loss: Option<f64>,
    /// Mean training-mode loss of every epoch.
    pub epoch_losses: Vec<f64>,
    pub train_accuracy: f64,
}

/// Random streams derived from the configured seed.
pub(crate) fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub(crate) const INIT_STREAM: u64 = 0;
const SHUFFLE_STREAM: u64 = 1;
const DROPOUT_STREAM: u64 = 2;

/// Logits and pre-logit activations of every input, in batches.
pub fn infer_all<N: Network>(net: &N, inputs: &[N::Input], batch_size: usize) -> Result<(Array2<f64>, Array2<f64>), NnError> {
    let mut logits = Vec::new();
    let mut pre = Vec::new();
    let refs: Vec<&N::Input> = inputs.iter().collect();
    for chunk in refs.chunks(batch_size.max(1)) {
        let (l, p) = net.infer(chunk)?;
        logits.push(l);
        pre.push(p);
    }
    let cat = |v: Vec<Array2<f64>>| -> Array2<f64> {
        let views: Vec<_> = v.iter().map(|a| a.view()).collect();
        ndarray::concatenate(Axis(0), &views).unwrap_or_else(|_| Array2::zeros((0, 0)))
    };
    Ok((cat(logits), cat(pre)))
}

pub fn argmax_rows(scores: ArrayView2<f64>) -> Vec<usize> {
    scores
        .rows()
        .into_iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
                .0
        })
        .collect()
}

fn evaluate<N: Network>(net: &N, inputs: &[N::Input], labels: &[usize], batch_size: usize) -> Result<(f64, f64), NnError> {
    let (logits, _) = infer_all(net, inputs, batch_size)?;
    let (loss, _) = softmax_cross_entropy_batch(logits.view(), labels);
    let correct = argmax_rows(logits.view()).iter().zip(labels).filter(|(p, y)| p == y).count();
    Ok((loss, correct as f64 / labels.len() as f64))
}

/// Mini-batch Adam training with a per-epoch shuffle.
pub fn fit_network<N: Network>(
    net: &mut N,
    inputs: &[N::Input],
    labels: &[usize],
    config: &TrainConfig,
) -> Result<TrainingLog, NnError> {
    config.validate()?;
    if inputs.is_empty() || inputs.len() != labels.len() {
        return Err(NnError::Shape(format!("{} inputs with {} labels", inputs.len(), labels.len())));
    }
    let mut shuffle = stream(config.seed, SHUFFLE_STREAM);
    let mut dropout = stream(config.seed, DROPOUT_STREAM);
    let mut adam = Adam::new(config.adam());
    let (initial_loss, _) = evaluate(net, inputs, labels, config.batch_size)?;
    let mut first_epoch_loss = initial_loss;
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    for epoch in 0..config.epochs {
        order.shuffle(&mut shuffle);
        let mut total = 0.0;
        for chunk in order.chunks(config.batch_size) {
            let batch: Vec<&N::Input> = chunk.iter().map(|&i| &inputs[i]).collect();
            let y: Vec<usize> = chunk.iter().map(|&i| labels[i]).collect();
            net.zero_grad();
            total += net.train_batch(&batch, &y, &mut dropout)? * chunk.len() as f64;
            adam.step(net.params_mut().into_iter().map(|(_, p)| p).collect())?;
        }
        epoch_losses.push(total / inputs.len() as f64);
        if epoch == 0 {
            first_epoch_loss = evaluate(net, inputs, labels, config.batch_size)?.0;
        }
        log::debug!("epoch {} loss {:.6}", epoch + 1, epoch_losses[epoch]);
    }
    let (_, train_accuracy) = evaluate(net, inputs, labels, config.batch_size)?;
    Ok(TrainingLog {
        initial_loss: Some(initial_loss),
        first_epoch_loss: Some(first_epoch_loss),
        epoch_losses,
        train_accuracy,
    })
}
