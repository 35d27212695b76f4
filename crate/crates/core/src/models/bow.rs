use std::collections::{BTreeSet, HashMap};

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BowMode {
    Count,
    TfIdf,
}

impl std::str::FromStr for BowMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "count" => Ok(Self::Count),
            "tfidf" | "tf-idf" => Ok(Self::TfIdf),
            _ => Err(format!("unknown vectorizer {s:?} (expected count or tfidf)")),
        }
    }
}

/// Sparse `(index, value)` entries of the old and new halves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowVector {
    pub mode: BowMode,
    pub vocab_size: usize,
    pub old_part: Vec<(usize, f64)>,
    pub new_part: Vec<(usize, f64)>,
}

impl BowVector {
    /// `old ⊕ new`, length `2 * vocab_size`.
    pub fn to_dense(&self) -> Array1<f64> {
        let mut v = Array1::zeros(2 * self.vocab_size);
        for &(i, x) in &self.old_part {
            v[i] = x;
        }
        for &(i, x) in &self.new_part {
            v[self.vocab_size + i] = x;
        }
        v
    }
}

/// Token vocabulary fitted on both sides of the training edits. Every
/// side counts as one document for document frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowVectorizer {
    pub mode: BowMode,
    pub vocabulary: Vec<String>,
    pub idf: Vec<f64>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl BowVectorizer {
    pub fn fit(edits: &[(Vec<String>, Vec<String>)], mode: BowMode) -> Self {
        let vocabulary: Vec<String> = edits
            .iter()
            .flat_map(|(o, n)| o.iter().chain(n))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<String, usize> = vocabulary.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut df = vec![0usize; vocabulary.len()];
        for side in edits.iter().flat_map(|(o, n)| [o, n]) {
            let distinct: BTreeSet<usize> = side.iter().map(|t| index[t]).collect();
            for i in distinct {
                df[i] += 1;
            }
        }
        let docs = 2 * edits.len();
        let idf = df.iter().map(|&d| 1.0 + ((1.0 + docs as f64) / (1.0 + d as f64)).ln()).collect();
        Self {
            mode,
            vocabulary,
            idf,
            index,
        }
    }

    pub fn from_parts(mode: BowMode, vocabulary: Vec<String>, idf: Vec<f64>) -> Self {
        let mut v = Self {
            mode,
            vocabulary,
            idf,
            index: HashMap::new(),
        };
        v.reindex();
        v
    }

    /// Rebuilds the lookup table after deserialization.
    pub fn reindex(&mut self) {
        self.index = self.vocabulary.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.vocab_size()
    }

    fn side(&self, tokens: &[String]) -> Vec<(usize, f64)> {
        let mut tf: Vec<(usize, f64)> = Vec::new();
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for t in tokens {
            if let Some(&i) = self.index.get(t) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        tf.extend(counts);
        tf.sort_by_key(|&(i, _)| i);
        if self.mode == BowMode::TfIdf {
            for (i, v) in tf.iter_mut() {
                *v *= self.idf[*i];
            }
            let norm = tf.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                for (_, v) in tf.iter_mut() {
                    *v /= norm;
                }
            }
        }
        tf
    }

    pub fn transform(&self, old: &[String], new: &[String]) -> BowVector {
        BowVector {
            mode: self.mode,
            vocab_size: self.vocab_size(),
            old_part: self.side(old),
            new_part: self.side(new),
        }
    }

    pub fn transform_all(&self, edits: &[(Vec<String>, Vec<String>)]) -> Array2<f64> {
        let mut m = Array2::zeros((edits.len(), self.dim()));
        for (i, (o, n)) in edits.iter().enumerate() {
            m.row_mut(i).assign(&self.transform(o, n).to_dense());
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn counting_and_bag_property() {
        let fit = BowVectorizer::fit(&[(toks("a b"), toks("b c"))], BowMode::Count);
        let v = fit.transform(&toks("a b"), &toks("b c")).to_dense();
        assert_eq!(v.to_vec(), [1.0, 1.0, 0.0, 0.0, 1.0, 1.0]);
        let p = fit.transform(&toks("b a"), &toks("c b z")).to_dense();
        assert_eq!(v, p);
    }

    #[test]
    fn ubiquitous_token_has_unit_idf() {
        let docs = [(toks("x a"), toks("x b")), (toks("x c"), toks("x"))];
        let fit = BowVectorizer::fit(&docs, BowMode::TfIdf);
        let x = fit.vocabulary.iter().position(|w| w == "x").unwrap();
        assert_eq!(fit.idf[x], 1.0);
        let v = fit.transform(&toks("x a a"), &toks("c"));
        let n: f64 = v.old_part.iter().map(|(_, x)| x * x).sum();
        assert!((n - 1.0).abs() < 1e-12);
        assert!(v.to_dense().iter().all(|&x| x >= 0.0));
    }
}
