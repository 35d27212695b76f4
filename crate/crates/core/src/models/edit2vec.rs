use std::collections::HashMap;
use std::ops::Range;

use ndarray::{concatenate, s, Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::encode::{ContextIds, EncodedEdit};
use super::network::{apply_mask, maybe_dropout, scatter_rows, EditEmbedding, Network};
use super::{CLASSIFIER_HIDDEN, CPCV_DIM, EDIT2VEC_R_DIM, PATH_EMBEDDING_DIM, PATH_HIDDEN_PER_DIRECTION, SUBTOKEN_DIM};
use crate::nncore::{
    attention_pool, softmax, softmax_cross_entropy_batch, Activation, Attention, AttentionCache, BiLstm,
    BiLstmCache, Dense, DropoutConfig, Embedding, NnError, Parameterized, RealArray,
};

/// Path-context encoder, attention code encoder and classifier. One set
/// of encoder weights serves both sides of an edit.
#[derive(Debug, Clone, PartialEq)]
pub struct Edit2Vec {
    pub subtokens: Embedding,
    pub paths: Embedding,
    pub path_encoder: BiLstm,
    pub pce: Dense,
    pub attention: Attention,
    pub code: Dense,
    pub hidden: Dense,
    pub output: Dense,
    pub dropout: DropoutConfig,
}

/// Results of a batch forward pass. Rows of `r` alternate old and new side.
#[derive(Debug, Clone)]
pub struct Edit2VecOutput {
    pub logits: Array2<f64>,
    pub prelogits: Array2<f64>,
    pub r: Array2<f64>,
    pub attention: Vec<f64>,
    pub groups: Vec<Range<usize>>,
}

#[derive(Debug, Clone)]
pub struct Edit2VecCache {
    unique: Vec<ContextIds>,
    instance_to_unique: Vec<usize>,
    paths: Vec<Vec<u32>>,
    unique_to_path: Vec<usize>,
    path_cache: BiLstmCache,
    path_mask: Option<Array2<f64>>,
    pce_in: Array2<f64>,
    pce_out: Array2<f64>,
    pce_mask: Option<Array2<f64>>,
    attention: AttentionCache,
    pooled: Array2<f64>,
    code_out: Array2<f64>,
    code_mask: Option<Array2<f64>>,
    classifier_in: Array2<f64>,
    prelogits: Array2<f64>,
    hidden_mask: Option<Array2<f64>>,
    hidden_out: Array2<f64>,
    logits: Array2<f64>,
}

impl Edit2Vec {
    pub fn new<R: Rng + ?Sized>(
        subtoken_vocab: usize,
        path_vocab: usize,
        num_classes: usize,
        dropout: DropoutConfig,
        rng: &mut R,
    ) -> Self {
        let pce_in = 2 * SUBTOKEN_DIM + 2 * PATH_HIDDEN_PER_DIRECTION;
        let model = Self {
            subtokens: Embedding::new(subtoken_vocab, SUBTOKEN_DIM, rng),
            paths: Embedding::new(path_vocab, PATH_EMBEDDING_DIM, rng),
            path_encoder: BiLstm::new(PATH_EMBEDDING_DIM, PATH_HIDDEN_PER_DIRECTION, rng),
            pce: Dense::new(pce_in, CPCV_DIM, Activation::Tanh, rng),
            attention: Attention::new(CPCV_DIM, rng),
            code: Dense::new(CPCV_DIM, EDIT2VEC_R_DIM, Activation::Tanh, rng),
            hidden: Dense::new(2 * EDIT2VEC_R_DIM, CLASSIFIER_HIDDEN, Activation::Tanh, rng),
            output: Dense::new(CLASSIFIER_HIDDEN, num_classes, Activation::Identity, rng),
            dropout,
        };
        model.assert_dimensions();
        model
    }

    /// Checks the layer widths against the architecture constants.
    pub fn assert_dimensions(&self) {
        assert_eq!(self.subtokens.dim(), SUBTOKEN_DIM);
        assert_eq!(self.paths.dim(), PATH_EMBEDDING_DIM);
        assert_eq!(self.path_encoder.output_dim(), 2 * PATH_HIDDEN_PER_DIRECTION);
        assert_eq!(self.pce.input_dim(), 2 * SUBTOKEN_DIM + self.path_encoder.output_dim());
        assert_eq!(self.pce.output_dim(), CPCV_DIM);
        assert_eq!(self.code.input_dim(), CPCV_DIM);
        assert_eq!(self.code.output_dim(), EDIT2VEC_R_DIM);
        assert_eq!(self.hidden.input_dim(), 2 * EDIT2VEC_R_DIM);
        assert_eq!(self.hidden.output_dim(), CLASSIFIER_HIDDEN);
        assert_eq!(self.output.input_dim(), CLASSIFIER_HIDDEN);
    }

    pub fn num_classes(&self) -> usize {
        self.output.output_dim()
    }

    fn mean_subtokens(&self, ids: &[u32]) -> Array1<f64> {
        let mut v = Array1::zeros(SUBTOKEN_DIM);
        for &id in ids {
            v += &self.subtokens.table.value.row(id as usize);
        }
        v / ids.len() as f64
    }

    fn check_ids(&self, ctx: &ContextIds) -> Result<(), NnError> {
        self.subtokens.check(&ctx.left)?;
        self.subtokens.check(&ctx.right)?;
        self.paths.check(&ctx.path)?;
        if ctx.left.is_empty() || ctx.right.is_empty() || ctx.path.is_empty() {
            return Err(NnError::EmptySequence);
        }
        Ok(())
    }

    pub fn forward(
        &self,
        batch: &[&EncodedEdit],
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> Result<(Edit2VecOutput, Edit2VecCache), NnError> {
        let d = self.dropout;
        let mut groups = Vec::with_capacity(2 * batch.len());
        let mut unique: Vec<ContextIds> = Vec::new();
        let mut seen: HashMap<&ContextIds, usize> = HashMap::new();
        let mut instance_to_unique = Vec::new();
        for edit in batch {
            for side in [&edit.old, &edit.new] {
                if side.is_empty() {
                    return Err(NnError::AllMasked);
                }
                let start = instance_to_unique.len();
                for ctx in side {
                    let u = *seen.entry(ctx).or_insert_with(|| {
                        unique.push(ctx.clone());
                        unique.len() - 1
                    });
                    instance_to_unique.push(u);
                }
                groups.push(start..instance_to_unique.len());
            }
        }
        for ctx in &unique {
            self.check_ids(ctx)?;
        }

        let mut path_index: HashMap<&[u32], usize> = HashMap::new();
        let mut paths: Vec<Vec<u32>> = Vec::new();
        let unique_to_path: Vec<usize> = unique
            .iter()
            .map(|c| {
                *path_index.entry(&c.path).or_insert_with(|| {
                    paths.push(c.path.clone());
                    paths.len() - 1
                })
            })
            .collect();
        let path_inputs: Vec<Array2<f64>> = paths.iter().map(|p| self.paths.lookup(p)).collect::<Result<_, _>>()?;
        let views: Vec<ArrayView2<f64>> = path_inputs.iter().map(|a| a.view()).collect();
        let (encoded_paths, path_cache) = self.path_encoder.run(&views)?;

        let v_path = encoded_paths.select(Axis(0), &unique_to_path);
        let (v_path, path_mask) = maybe_dropout(v_path, d.lstm_internal, &mut rng);
        let mut v_left = Array2::zeros((unique.len(), SUBTOKEN_DIM));
        let mut v_right = Array2::zeros((unique.len(), SUBTOKEN_DIM));
        for (u, ctx) in unique.iter().enumerate() {
            v_left.row_mut(u).assign(&self.mean_subtokens(&ctx.left));
            v_right.row_mut(u).assign(&self.mean_subtokens(&ctx.right));
        }
        let pce_in = concatenate(Axis(1), &[v_left.view(), v_path.view(), v_right.view()]).expect("same rows");
        let pce_out = self.pce.forward(pce_in.view())?;

        let cpcv = pce_out.select(Axis(0), &instance_to_unique);
        let (cpcv, pce_mask) = maybe_dropout(cpcv, d.pce_tanh, &mut rng);
        let (pooled, attention) = self.attention.forward(cpcv, &groups)?;
        let code_out = self.code.forward(pooled.view())?;
        let (r, code_mask) = maybe_dropout(code_out.clone(), d.ce_tanh, &mut rng);

        let classifier_in = r
            .clone()
            .into_shape_with_order((batch.len(), 2 * EDIT2VEC_R_DIM))
            .expect("old and new rows are adjacent");
        let prelogits = self.hidden.forward(classifier_in.view())?;
        let (hidden_out, hidden_mask) = maybe_dropout(prelogits.clone(), d.classifier_tanh, &mut rng);
        let logits = self.output.forward(hidden_out.view())?;

        let out = Edit2VecOutput {
            logits: logits.clone(),
            prelogits: prelogits.clone(),
            r,
            attention: attention.weights.to_vec(),
            groups,
        };
        let cache = Edit2VecCache {
            unique,
            instance_to_unique,
            paths,
            unique_to_path,
            path_cache,
            path_mask,
            pce_in,
            pce_out,
            pce_mask,
            attention,
            pooled,
            code_out,
            code_mask,
            classifier_in,
            prelogits,
            hidden_mask,
            hidden_out,
            logits,
        };
        Ok((out, cache))
    }

    /// Accumulates the gradients of every parameter given `dL/dlogits`.
    pub fn backward(&mut self, cache: &Edit2VecCache, d_logits: Array2<f64>) {
        let c = cache;
        let d_hidden = self.output.backward(c.hidden_out.view(), c.logits.view(), d_logits);
        let d_hidden = apply_mask(d_hidden, &c.hidden_mask);
        let d_in = self.hidden.backward(c.classifier_in.view(), c.prelogits.view(), d_hidden);
        let rows = 2 * d_in.nrows();
        let d_r = d_in.into_shape_with_order((rows, EDIT2VEC_R_DIM)).expect("contiguous");
        let d_r = apply_mask(d_r, &c.code_mask);
        let d_pooled = self.code.backward(c.pooled.view(), c.code_out.view(), d_r);
        let d_cpcv = self.attention.backward(&c.attention, d_pooled.view());
        let d_cpcv = apply_mask(d_cpcv, &c.pce_mask);
        let d_pce_out = scatter_rows(d_cpcv.view(), &c.instance_to_unique, c.unique.len());
        let d_pce_in = self.pce.backward(c.pce_in.view(), c.pce_out.view(), d_pce_out);

        let (s0, s1) = (SUBTOKEN_DIM, SUBTOKEN_DIM + 2 * PATH_HIDDEN_PER_DIRECTION);
        for (u, ctx) in c.unique.iter().enumerate() {
            for (ids, cols) in [(&ctx.left, s![u, ..s0]), (&ctx.right, s![u, s1..])] {
                let g = &d_pce_in.slice(cols) / ids.len() as f64;
                for &id in ids.iter() {
                    if id != crate::pathctx::PAD {
                        let mut row = self.subtokens.table.grad.row_mut(id as usize);
                        row += &g;
                    }
                }
            }
        }
        let d_vpath = apply_mask(d_pce_in.slice(s![.., s0..s1]).to_owned(), &c.path_mask);
        let d_paths = scatter_rows(d_vpath.view(), &c.unique_to_path, c.paths.len());
        let d_inputs = self.path_encoder.backprop(&c.path_cache, d_paths.view());
        for (ids, dx) in c.paths.iter().zip(d_inputs) {
            self.paths.accumulate(ids, dx.view());
        }
    }

    /// Compact path-context vector of one context (inference mode).
    pub fn pce_forward(&self, ctx: &ContextIds) -> Result<Array1<f64>, NnError> {
        self.check_ids(ctx)?;
        let path = self.paths.lookup(&ctx.path)?;
        let v_path = self.path_encoder.encode(path.view(), &vec![true; ctx.path.len()])?;
        let input = concatenate(
            Axis(0),
            &[self.mean_subtokens(&ctx.left).view(), v_path.view(), self.mean_subtokens(&ctx.right).view()],
        )
        .expect("vectors");
        Ok(self.pce.forward(input.insert_axis(Axis(0)).view())?.row(0).to_owned())
    }

    /// Side encoding `r` and the attention weight of every slot.
    pub fn code_encoder_forward(
        &self,
        cpcvs: ArrayView2<f64>,
        mask: &[bool],
    ) -> Result<(Array1<f64>, Array1<f64>), NnError> {
        let (pooled, weights) = attention_pool(cpcvs, mask, &self.attention)?;
        let r = self.code.forward(pooled.insert_axis(Axis(0)).view())?;
        Ok((r.row(0).to_owned(), weights))
    }

    /// Class probabilities from the two side encodings.
    pub fn classify<'a>(&self, r_old: ArrayView1<'a, f64>, r_new: ArrayView1<'a, f64>) -> Result<Array1<f64>, NnError> {
        if r_old.len() != EDIT2VEC_R_DIM || r_new.len() != EDIT2VEC_R_DIM {
            return Err(NnError::Shape(format!(
                "classifier expects two {EDIT2VEC_R_DIM}-vectors, got {} and {}",
                r_old.len(),
                r_new.len()
            )));
        }
        let x = concatenate(Axis(0), &[r_old, r_new]).expect("vectors").insert_axis(Axis(0));
        let h = self.hidden.forward(x.view())?;
        let logits = self.output.forward(h.view())?;
        Ok(softmax(logits.row(0)))
    }

    /// Inference-mode side encodings and attention weights over `slots`
    /// positions (masked positions get weight 0).
    pub fn embed(&self, edit: &EncodedEdit, slots: usize) -> Result<EditEmbedding, NnError> {
        let (out, _) = self.forward(&[edit], None)?;
        let weights = |g: &Range<usize>| {
            let mut w = Array1::zeros(slots.max(g.len()));
            for (k, i) in g.clone().enumerate() {
                w[k] = out.attention[i];
            }
            w
        };
        Ok(EditEmbedding {
            r_old: out.r.row(0).to_owned(),
            r_new: out.r.row(1).to_owned(),
            attention_old: Some(weights(&out.groups[0])),
            attention_new: Some(weights(&out.groups[1])),
        })
    }
}

impl Network for Edit2Vec {
    type Input = EncodedEdit;

    fn train_batch(&mut self, batch: &[&EncodedEdit], labels: &[usize], rng: &mut ChaCha8Rng) -> Result<f64, NnError> {
        let (out, cache) = self.forward(batch, Some(rng))?;
        let (loss, d_logits) = softmax_cross_entropy_batch(out.logits.view(), labels);
        self.backward(&cache, d_logits);
        Ok(loss)
    }

    fn infer(&self, batch: &[&EncodedEdit]) -> Result<(Array2<f64>, Array2<f64>), NnError> {
        let (out, _) = self.forward(batch, None)?;
        Ok((out.logits, out.prelogits))
    }
}

impl Parameterized for Edit2Vec {
    fn params(&self) -> Vec<(String, &RealArray)> {
        use crate::nncore::prefixed;
        let mut v = prefixed("subtokens", self.subtokens.params());
        v.extend(prefixed("paths", self.paths.params()));
        v.extend(prefixed("path_encoder", self.path_encoder.params()));
        v.extend(prefixed("pce", self.pce.params()));
        v.extend(prefixed("attention", self.attention.params()));
        v.extend(prefixed("code", self.code.params()));
        v.extend(prefixed("hidden", self.hidden.params()));
        v.extend(prefixed("output", self.output.params()));
        v
    }

    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
        use crate::nncore::prefixed_mut;
        let mut v = prefixed_mut("subtokens", self.subtokens.params_mut());
        v.extend(prefixed_mut("paths", self.paths.params_mut()));
        v.extend(prefixed_mut("path_encoder", self.path_encoder.params_mut()));
        v.extend(prefixed_mut("pce", self.pce.params_mut()));
        v.extend(prefixed_mut("attention", self.attention.params_mut()));
        v.extend(prefixed_mut("code", self.code.params_mut()));
        v.extend(prefixed_mut("hidden", self.hidden.params_mut()));
        v.extend(prefixed_mut("output", self.output.params_mut()));
        v
    }
}
