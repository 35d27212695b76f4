use std::collections::HashMap;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::encode::TokenEdit;
use super::network::{apply_mask, maybe_dropout, scatter_rows, EditEmbedding, Network};
use super::{BASELINE_R_DIM, CLASSIFIER_HIDDEN, TOKEN_EMBEDDING_DIM};
use crate::nncore::{
    prefixed, prefixed_mut, softmax, softmax_cross_entropy_batch, Activation, Dense, Embedding, Lstm, LstmCache,
    NnError, Parameterized, RealArray,
};

/// Token embedding and LSTM shared by both sides, then a tanh classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmBaseline {
    pub tokens: Embedding,
    pub lstm: Lstm,
    pub hidden: Dense,
    pub output: Dense,
    pub dropout: f64,
}

#[derive(Debug, Clone)]
pub struct LstmBaselineCache {
    sequences: Vec<Vec<u32>>,
    instance_to_unique: Vec<usize>,
    lstm: LstmCache,
    r_mask: Option<Array2<f64>>,
    classifier_in: Array2<f64>,
    prelogits: Array2<f64>,
    logits: Array2<f64>,
}

#[derive(Debug, Clone)]
pub struct LstmBaselineOutput {
    pub logits: Array2<f64>,
    pub prelogits: Array2<f64>,
    /// Rows alternate old and new side.
    pub r: Array2<f64>,
}

impl LstmBaseline {
    pub fn new<R: Rng + ?Sized>(token_vocab: usize, num_classes: usize, dropout: f64, rng: &mut R) -> Self {
        let model = Self {
            tokens: Embedding::new(token_vocab, TOKEN_EMBEDDING_DIM, rng),
            lstm: Lstm::new(TOKEN_EMBEDDING_DIM, BASELINE_R_DIM, rng),
            hidden: Dense::new(2 * BASELINE_R_DIM, CLASSIFIER_HIDDEN, Activation::Tanh, rng),
            output: Dense::new(CLASSIFIER_HIDDEN, num_classes, Activation::Identity, rng),
            dropout,
        };
        model.assert_dimensions();
        model
    }

    pub fn assert_dimensions(&self) {
        assert_eq!(self.tokens.dim(), TOKEN_EMBEDDING_DIM);
        assert_eq!(self.lstm.input_dim(), TOKEN_EMBEDDING_DIM);
        assert_eq!(self.lstm.hidden(), BASELINE_R_DIM);
        assert_eq!(self.hidden.input_dim(), 2 * BASELINE_R_DIM);
        assert_eq!(self.hidden.output_dim(), CLASSIFIER_HIDDEN);
        assert_eq!(self.output.input_dim(), CLASSIFIER_HIDDEN);
    }

    pub fn num_classes(&self) -> usize {
        self.output.output_dim()
    }

    pub fn forward(
        &self,
        batch: &[&TokenEdit],
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> Result<(LstmBaselineOutput, LstmBaselineCache), NnError> {
        let mut sequences: Vec<Vec<u32>> = Vec::new();
        let mut seen: HashMap<&[u32], usize> = HashMap::new();
        let mut instance_to_unique = Vec::with_capacity(2 * batch.len());
        for edit in batch {
            for side in [&edit.old, &edit.new] {
                if side.is_empty() {
                    return Err(NnError::EmptySequence);
                }
                let u = *seen.entry(side.as_slice()).or_insert_with(|| {
                    sequences.push(side.clone());
                    sequences.len() - 1
                });
                instance_to_unique.push(u);
            }
        }
        let inputs: Vec<Array2<f64>> = sequences.iter().map(|s| self.tokens.lookup(s)).collect::<Result<_, _>>()?;
        let views: Vec<ArrayView2<f64>> = inputs.iter().map(|a| a.view()).collect();
        let (states, lstm) = self.lstm.forward(&views)?;
        let r = states.select(Axis(0), &instance_to_unique);
        let (dropped, r_mask) = maybe_dropout(r.clone(), self.dropout, &mut rng);
        let classifier_in = dropped
            .into_shape_with_order((batch.len(), 2 * BASELINE_R_DIM))
            .expect("old and new rows are adjacent");
        let prelogits = self.hidden.forward(classifier_in.view())?;
        let logits = self.output.forward(prelogits.view())?;
        let out = LstmBaselineOutput {
            logits: logits.clone(),
            prelogits: prelogits.clone(),
            r,
        };
        let cache = LstmBaselineCache {
            sequences,
            instance_to_unique,
            lstm,
            r_mask,
            classifier_in,
            prelogits,
            logits,
        };
        Ok((out, cache))
    }

    pub fn backward(&mut self, cache: &LstmBaselineCache, d_logits: Array2<f64>) {
        let c = cache;
        let d_hidden = self.output.backward(c.prelogits.view(), c.logits.view(), d_logits);
        let d_in = self.hidden.backward(c.classifier_in.view(), c.prelogits.view(), d_hidden);
        let rows = 2 * d_in.nrows();
        let d_r = d_in.into_shape_with_order((rows, BASELINE_R_DIM)).expect("contiguous");
        let d_r = apply_mask(d_r, &c.r_mask);
        let d_states = scatter_rows(d_r.view(), &c.instance_to_unique, c.sequences.len());
        let d_inputs = self.lstm.backward(&c.lstm, d_states.view());
        for (ids, dx) in c.sequences.iter().zip(d_inputs) {
            self.tokens.accumulate(ids, dx.view());
        }
    }

    pub fn embed(&self, edit: &TokenEdit) -> Result<EditEmbedding, NnError> {
        let (out, _) = self.forward(&[edit], None)?;
        Ok(EditEmbedding {
            r_old: out.r.row(0).to_owned(),
            r_new: out.r.row(1).to_owned(),
            attention_old: None,
            attention_new: None,
        })
    }

    pub fn classify<'a>(&self, r_old: ArrayView1<'a, f64>, r_new: ArrayView1<'a, f64>) -> Result<Array1<f64>, NnError> {
        if r_old.len() != BASELINE_R_DIM || r_new.len() != BASELINE_R_DIM {
            return Err(NnError::Shape(format!(
                "classifier expects two {BASELINE_R_DIM}-vectors, got {} and {}",
                r_old.len(),
                r_new.len()
            )));
        }
        let x = ndarray::concatenate(Axis(0), &[r_old, r_new]).expect("vectors").insert_axis(Axis(0));
        let logits = self.output.forward(self.hidden.forward(x.view())?.view())?;
        Ok(softmax(logits.row(0)))
    }
}

impl Network for LstmBaseline {
    type Input = TokenEdit;

    fn train_batch(&mut self, batch: &[&TokenEdit], labels: &[usize], rng: &mut ChaCha8Rng) -> Result<f64, NnError> {
        let (out, cache) = self.forward(batch, Some(rng))?;
        let (loss, d_logits) = softmax_cross_entropy_batch(out.logits.view(), labels);
        self.backward(&cache, d_logits);
        Ok(loss)
    }

    fn infer(&self, batch: &[&TokenEdit]) -> Result<(Array2<f64>, Array2<f64>), NnError> {
        let (out, _) = self.forward(batch, None)?;
        Ok((out.logits, out.prelogits))
    }
}

impl Parameterized for LstmBaseline {
    fn params(&self) -> Vec<(String, &RealArray)> {
        let mut v = prefixed("tokens", self.tokens.params());
        v.extend(prefixed("lstm", self.lstm.params()));
        v.extend(prefixed("hidden", self.hidden.params()));
        v.extend(prefixed("output", self.output.params()));
        v
    }

    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
        let mut v = prefixed_mut("tokens", self.tokens.params_mut());
        v.extend(prefixed_mut("lstm", self.lstm.params_mut()));
        v.extend(prefixed_mut("hidden", self.hidden.params_mut()));
        v.extend(prefixed_mut("output", self.output.params_mut()));
        v
    }
}
