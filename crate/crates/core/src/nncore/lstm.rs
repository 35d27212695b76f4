use ndarray::linalg::general_mat_mul;
use ndarray::{concatenate, s, Array1, Array2, ArrayView2, Axis};
use rand::Rng;

use super::array::{prefixed, prefixed_mut, Parameterized};
use super::{NnError, RealArray};

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `tanh` through a single `exp`, noticeably cheaper than libm's.
fn tanh(x: f64) -> f64 {
    1.0 - 2.0 / ((2.0 * x).exp() + 1.0)
}

/// Single-direction LSTM with gate order (input, forget, cell, output),
/// zero initial state and forget-gate bias initialised to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Lstm {
    pub w: RealArray,
    pub u: RealArray,
    pub b: RealArray,
}

/// Everything the backward pass needs. Sequences are stored packed:
/// sorted by decreasing length, time-major, so step `t` occupies rows
/// `offsets[t]..offsets[t] + batch_sizes[t]`.
#[derive(Debug, Clone)]
pub struct LstmCache {
    order: Vec<usize>,
    lengths: Vec<usize>,
    batch_sizes: Vec<usize>,
    offsets: Vec<usize>,
    x: Array2<f64>,
    gates: Array2<f64>,
    c: Array2<f64>,
    tanh_c: Array2<f64>,
    h: Array2<f64>,
}

impl Lstm {
    pub fn new<R: Rng + ?Sized>(input: usize, hidden: usize, rng: &mut R) -> Self {
        let mut b = RealArray::zeros(1, 4 * hidden);
        b.value.slice_mut(s![0, hidden..2 * hidden]).fill(1.0);
        Self {
            w: RealArray::uniform(input, 4 * hidden, input, rng),
            u: RealArray::uniform(hidden, 4 * hidden, hidden, rng),
            b,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w.shape().0
    }

    pub fn hidden(&self) -> usize {
        self.u.shape().0
    }

    /// Final hidden state of every sequence, one row each, in input order.
    pub fn forward(&self, seqs: &[ArrayView2<f64>]) -> Result<(Array2<f64>, LstmCache), NnError> {
        let h = self.hidden();
        for s in seqs {
            if s.nrows() == 0 {
                return Err(NnError::EmptySequence);
            }
            if s.ncols() != self.input_dim() {
                return Err(NnError::Shape(format!(
                    "lstm expects {} inputs per step, got {}",
                    self.input_dim(),
                    s.ncols()
                )));
            }
        }
        let mut order: Vec<usize> = (0..seqs.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(seqs[i].nrows()));
        let lengths: Vec<usize> = order.iter().map(|&i| seqs[i].nrows()).collect();
        let steps = lengths.first().copied().unwrap_or(0);
        let batch_sizes: Vec<usize> = (0..steps).map(|t| lengths.iter().take_while(|&&l| l > t).count()).collect();
        let mut offsets = Vec::with_capacity(steps);
        let mut total = 0;
        for &n in &batch_sizes {
            offsets.push(total);
            total += n;
        }

        let mut x = Array2::zeros((total, self.input_dim()));
        for t in 0..steps {
            for j in 0..batch_sizes[t] {
                x.row_mut(offsets[t] + j).assign(&seqs[order[j]].row(t));
            }
        }
        let mut gates = x.dot(&self.w.value);
        gates += &self.b.value.row(0);
        let mut c = Array2::zeros((total, h));
        let mut tanh_c = Array2::zeros((total, h));
        let mut hs = Array2::zeros((total, h));

        for t in 0..steps {
            let (lo, n) = (offsets[t], batch_sizes[t]);
            if t > 0 {
                let prev = offsets[t - 1];
                let h_prev = hs.slice(s![prev..prev + n, ..]);
                let mut z = gates.slice_mut(s![lo..lo + n, ..]);
                general_mat_mul(1.0, &h_prev, &self.u.value, 1.0, &mut z);
            }
            let cf = c.as_slice_mut().unwrap();
            let tf = tanh_c.as_slice_mut().unwrap();
            let hf = hs.as_slice_mut().unwrap();
            let gf = gates.as_slice_mut().unwrap();
            for j in 0..n {
                let r = lo + j;
                let prev = (t > 0).then(|| (offsets[t - 1] + j) * h);
                let g = &mut gf[r * 4 * h..(r + 1) * 4 * h];
                for k in 0..h {
                    let i = sigmoid(g[k]);
                    let f = sigmoid(g[h + k]);
                    let cell = tanh(g[2 * h + k]);
                    let o = sigmoid(g[3 * h + k]);
                    g[k] = i;
                    g[h + k] = f;
                    g[2 * h + k] = cell;
                    g[3 * h + k] = o;
                    let cp = prev.map_or(0.0, |p| cf[p + k]);
                    let cv = f * cp + i * cell;
                    let tc = tanh(cv);
                    cf[r * h + k] = cv;
                    tf[r * h + k] = tc;
                    hf[r * h + k] = o * tc;
                }
            }
        }

        let mut out = Array2::zeros((seqs.len(), h));
        for (j, &orig) in order.iter().enumerate() {
            out.row_mut(orig).assign(&hs.row(offsets[lengths[j] - 1] + j));
        }
        let cache = LstmCache {
            order,
            lengths,
            batch_sizes,
            offsets,
            x,
            gates,
            c,
            tanh_c,
            h: hs,
        };
        Ok((out, cache))
    }

    /// Backpropagates `d_final` (one row per sequence, input order) and
    /// returns the input gradient of every sequence.
    pub fn backward(&mut self, cache: &LstmCache, d_final: ArrayView2<f64>) -> Vec<Array2<f64>> {
        let h = self.hidden();
        let LstmCache {
            order,
            lengths,
            batch_sizes,
            offsets,
            ..
        } = cache;
        let steps = batch_sizes.len();
        let total = cache.x.nrows();
        let mut dz = Array2::zeros((total, 4 * h));
        let bsz = order.len();
        let mut dh_carry = Array2::<f64>::zeros((bsz, h));
        let mut dc_carry = Array2::<f64>::zeros((bsz, h));
        let mut dh = Array2::<f64>::zeros((bsz, h));

        for t in (0..steps).rev() {
            let (lo, n) = (offsets[t], batch_sizes[t]);
            let n_next = batch_sizes.get(t + 1).copied().unwrap_or(0);
            for j in 0..n {
                let src = if j < n_next { dh_carry.row(j) } else { d_final.row(order[j]) };
                dh.row_mut(j).assign(&src);
                if j >= n_next {
                    dc_carry.row_mut(j).fill(0.0);
                }
            }
            let gf = cache.gates.as_slice().unwrap();
            let cf = cache.c.as_slice().unwrap();
            let tf = cache.tanh_c.as_slice().unwrap();
            let dzf = dz.as_slice_mut().unwrap();
            let dhf = dh.as_slice().unwrap();
            let dcf = dc_carry.as_slice_mut().unwrap();
            for j in 0..n {
                let r = lo + j;
                let prev = (t > 0).then(|| (offsets[t - 1] + j) * h);
                let g = &gf[r * 4 * h..(r + 1) * 4 * h];
                let d = &mut dzf[r * 4 * h..(r + 1) * 4 * h];
                let tcs = &tf[r * h..(r + 1) * h];
                let dhs = &dhf[j * h..(j + 1) * h];
                let dcs = &mut dcf[j * h..(j + 1) * h];
                for k in 0..h {
                    let (i, f, cell, o) = (g[k], g[h + k], g[2 * h + k], g[3 * h + k]);
                    let tc = tcs[k];
                    let dhv = dhs[k];
                    let dc = dcs[k] + dhv * o * (1.0 - tc * tc);
                    let cp = prev.map_or(0.0, |p| cf[p + k]);
                    d[k] = dc * cell * i * (1.0 - i);
                    d[h + k] = dc * cp * f * (1.0 - f);
                    d[2 * h + k] = dc * i * (1.0 - cell * cell);
                    d[3 * h + k] = dhv * tc * o * (1.0 - o);
                    dcs[k] = dc * f;
                }
            }
            if t > 0 {
                let prev = offsets[t - 1];
                let dz_t = dz.slice(s![lo..lo + n, ..]);
                let h_prev = cache.h.slice(s![prev..prev + n, ..]);
                general_mat_mul(1.0, &h_prev.t(), &dz_t, 1.0, &mut self.u.grad);
                let mut carry = dh_carry.slice_mut(s![..n, ..]);
                general_mat_mul(1.0, &dz_t, &self.u.value.t(), 0.0, &mut carry);
            }
        }

        {
            let mut gb = self.b.grad.row_mut(0);
            gb += &dz.sum_axis(Axis(0));
        }
        general_mat_mul(1.0, &cache.x.t(), &dz, 1.0, &mut self.w.grad);
        let dx = dz.dot(&self.w.value.t());
        let mut out: Vec<Array2<f64>> = vec![Array2::zeros((0, 0)); bsz];
        for (j, &orig) in order.iter().enumerate() {
            let mut a = Array2::zeros((lengths[j], self.input_dim()));
            for t in 0..lengths[j] {
                a.row_mut(t).assign(&dx.row(offsets[t] + j));
            }
            out[orig] = a;
        }
        out
    }

    /// Final state over the unmasked prefix of `seq`.
    pub fn encode(&self, seq: ArrayView2<f64>, mask: &[bool]) -> Result<Array1<f64>, NnError> {
        let len = mask.iter().take_while(|&&m| m).count();
        if len == 0 {
            return Err(NnError::EmptySequence);
        }
        let (out, _) = self.forward(&[seq.slice(s![..len, ..])])?;
        Ok(out.row(0).to_owned())
    }
}

impl Parameterized for Lstm {
    fn params(&self) -> Vec<(String, &RealArray)> {
        vec![("w".into(), &self.w), ("u".into(), &self.u), ("b".into(), &self.b)]
    }

    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
        vec![("w".into(), &mut self.w), ("u".into(), &mut self.u), ("b".into(), &mut self.b)]
    }
}

/// Forward and backward LSTMs whose final states are concatenated.
#[derive(Debug, Clone, PartialEq)]
pub struct BiLstm {
    pub forward: Lstm,
    pub backward: Lstm,
}

#[derive(Debug, Clone)]
pub struct BiLstmCache {
    fwd: LstmCache,
    bwd: LstmCache,
}

impl BiLstm {
    pub fn new<R: Rng + ?Sized>(input: usize, hidden_per_direction: usize, rng: &mut R) -> Self {
        Self {
            forward: Lstm::new(input, hidden_per_direction, rng),
            backward: Lstm::new(input, hidden_per_direction, rng),
        }
    }

    pub fn output_dim(&self) -> usize {
        self.forward.hidden() + self.backward.hidden()
    }

    pub fn run(&self, seqs: &[ArrayView2<f64>]) -> Result<(Array2<f64>, BiLstmCache), NnError> {
        let reversed: Vec<ArrayView2<f64>> = seqs.iter().map(|s| s.slice(s![..;-1, ..])).collect();
        let (f, fwd) = self.forward.forward(seqs)?;
        let (b, bwd) = self.backward.forward(&reversed)?;
        let out = concatenate(Axis(1), &[f.view(), b.view()]).expect("equal row counts");
        Ok((out, BiLstmCache { fwd, bwd }))
    }

    pub fn backprop(&mut self, cache: &BiLstmCache, d_out: ArrayView2<f64>) -> Vec<Array2<f64>> {
        let hf = self.forward.hidden();
        let df = self.forward.backward(&cache.fwd, d_out.slice(s![.., ..hf]));
        let db = self.backward.backward(&cache.bwd, d_out.slice(s![.., hf..]));
        df.into_iter()
            .zip(db)
            .map(|(mut a, b)| {
                a += &b.slice(s![..;-1, ..]);
                a
            })
            .collect()
    }

    pub fn encode(&self, seq: ArrayView2<f64>, mask: &[bool]) -> Result<Array1<f64>, NnError> {
        let len = mask.iter().take_while(|&&m| m).count();
        if len == 0 {
            return Err(NnError::EmptySequence);
        }
        let (out, _) = self.run(&[seq.slice(s![..len, ..])])?;
        Ok(out.row(0).to_owned())
    }
}

impl Parameterized for BiLstm {
    fn params(&self) -> Vec<(String, &RealArray)> {
        let mut v = prefixed("fwd", self.forward.params());
        v.extend(prefixed("bwd", self.backward.params()));
        v
    }

    fn params_mut(&mut self) -> Vec<(String, &mut RealArray)> {
        let mut v = prefixed_mut("fwd", self.forward.params_mut());
        v.extend(prefixed_mut("bwd", self.backward.params_mut()));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zero(l: &mut Lstm) {
        for (_, p) in l.params_mut() {
            p.value.fill(0.0);
        }
    }

    #[test]
    fn zero_weights_give_zero_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut bi = BiLstm::new(4, 80, &mut rng);
        zero(&mut bi.forward);
        zero(&mut bi.backward);
        let seq = Array2::from_elem((3, 4), 0.7);
        let out = bi.encode(seq.view(), &[true; 3]).unwrap();
        assert_eq!(out.len(), 160);
        assert!(out.iter().all(|&v| v == 0.0));
        let single = Lstm::new(4, 196, &mut rng);
        assert_eq!(single.encode(seq.view(), &[true, true, false]).unwrap().len(), 196);
        assert!(matches!(single.encode(seq.view(), &[false; 3]), Err(NnError::EmptySequence)));
    }

    #[test]
    fn batching_matches_one_at_a_time() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let bi = BiLstm::new(3, 5, &mut rng);
        let seqs: Vec<Array2<f64>> = [4, 1, 3, 4, 2]
            .iter()
            .map(|&t| Array2::from_shape_fn((t, 3), |_| rng.random_range(-1.0..1.0)))
            .collect();
        let views: Vec<_> = seqs.iter().map(|s| s.view()).collect();
        let (batched, _) = bi.run(&views).unwrap();
        for (i, s) in seqs.iter().enumerate() {
            let (one, _) = bi.run(&[s.view()]).unwrap();
            for (a, b) in one.row(0).iter().zip(batched.row(i)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
