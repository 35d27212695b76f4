use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use super::baseline::LstmBaseline;
use super::bow::{BowMode, BowVectorizer};
use super::edit2vec::Edit2Vec;
use super::encode::{edit_tokens, EncodedEdit, TokenEdit};
use super::network::{argmax_rows, fit_network, infer_all, stream, TrainingLog, INIT_STREAM};
use super::svm::{svm_train, FourierFeatures, Kernel, Svm, SvmConfig};
use super::ModelError;
use crate::data::{prepare_edit, CodeEdit};
use crate::nncore::{read_checkpoint, softmax, write_checkpoint, Parameterized, TrainConfig};
use crate::pathctx::{build_vocabulary, EditPathContexts, Vocabulary, MAX_CONTEXTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Edit2vec,
    Lstm,
    Bow,
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "edit2vec" => Ok(Self::Edit2vec),
            "lstm" => Ok(Self::Lstm),
            "bow" => Ok(Self::Bow),
            _ => Err(format!("unknown model {s:?} (expected edit2vec, lstm or bow)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowOptions {
    pub mode: BowMode,
    pub svm: SvmConfig,
}

/// A model family with its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "model", content = "config")]
pub enum ModelSpec {
    Edit2vec(TrainConfig),
    Lstm(TrainConfig),
    Bow(BowOptions),
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Edit2vec(_) => ModelKind::Edit2vec,
            ModelSpec::Lstm(_) => ModelKind::Lstm,
            ModelSpec::Bow(_) => ModelKind::Bow,
        }
    }

    /// Short display name such as `edit2vec` or `bow-tfidf-rbf`.
    pub fn name(&self) -> String {
        match self {
            ModelSpec::Edit2vec(_) => "edit2vec".into(),
            ModelSpec::Lstm(_) => "lstm".into(),
            ModelSpec::Bow(o) => format!(
                "bow-{}-{}",
                match o.mode {
                    BowMode::Count => "count",
                    BowMode::TfIdf => "tfidf",
                },
                match o.svm.kernel {
                    Kernel::Linear => "linear",
                    Kernel::Rbf => "rbf",
                }
            ),
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            ModelSpec::Edit2vec(c) | ModelSpec::Lstm(c) => c.seed,
            ModelSpec::Bow(o) => o.svm.seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut s = self.clone();
        match &mut s {
            ModelSpec::Edit2vec(c) | ModelSpec::Lstm(c) => c.seed = seed,
            ModelSpec::Bow(o) => o.svm.seed = seed,
        }
        s
    }
}

#[derive(Debug, Clone)]
pub enum Classifier {
    Edit2vec { net: Edit2Vec, vocabulary: Vocabulary },
    Lstm { net: LstmBaseline, vocabulary: Vocabulary },
    Bow { vectorizer: BowVectorizer, svm: Svm },
}

/// A trained classifier together with the class names it predicts.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub spec: ModelSpec,
    pub classes: Vec<String>,
    pub classifier: Classifier,
    pub log: Option<TrainingLog>,
}

/// JSON metadata stored next to the binary checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub spec: ModelSpec,
    pub classes: Vec<String>,
    pub vocabulary: Option<Vocabulary>,
    pub vocabulary_sha256: Option<String>,
    pub bow_vocabulary: Option<Vec<String>>,
    pub parameters: usize,
    pub training: Option<TrainingLog>,
}

pub fn sidecar_path(checkpoint: &Path) -> PathBuf {
    let mut s = checkpoint.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn contexts_of(edits: &[CodeEdit]) -> Result<Vec<EditPathContexts>, ModelError> {
    edits
        .iter()
        .map(|e| {
            prepare_edit(e, MAX_CONTEXTS).map_err(|r| ModelError::Prepare {
                id: e.id.clone(),
                reason: r.as_str().into(),
            })
        })
        .collect()
}

fn tokens_of(edits: &[CodeEdit]) -> Result<Vec<(Vec<String>, Vec<String>)>, ModelError> {
    edits
        .iter()
        .map(|e| {
            edit_tokens(&e.old_source, &e.new_source).map_err(|err| ModelError::Prepare {
                id: e.id.clone(),
                reason: err.to_string(),
            })
        })
        .collect()
}

fn check_labels(edits: &[CodeEdit], labels: &[usize], classes: &[String]) -> Result<(), ModelError> {
    if edits.is_empty() {
        return Err(ModelError::EmptyDataset);
    }
    if edits.len() != labels.len() {
        return Err(ModelError::Config(format!("{} edits with {} labels", edits.len(), labels.len())));
    }
    if classes.len() < 2 {
        return Err(ModelError::Config("at least two classes are needed".into()));
    }
    if let Some(y) = labels.iter().find(|&&y| y >= classes.len()) {
        return Err(ModelError::Config(format!("label {y} out of range for {} classes", classes.len())));
    }
    Ok(())
}

impl TrainedModel {
    pub fn train(spec: &ModelSpec, edits: &[CodeEdit], labels: &[usize], classes: &[String]) -> Result<Self, ModelError> {
        check_labels(edits, labels, classes)?;
        let k = classes.len();
        let (classifier, log) = match spec {
            ModelSpec::Edit2vec(cfg) => {
                cfg.validate()?;
                let contexts = contexts_of(edits)?;
                let vocabulary = build_vocabulary(&contexts, &[], cfg.min_count);
                let inputs: Vec<EncodedEdit> = contexts.iter().map(|c| EncodedEdit::encode(c, &vocabulary)).collect();
                let mut rng = stream(cfg.seed, INIT_STREAM);
                let mut net = Edit2Vec::new(vocabulary.subtokens.len(), vocabulary.path_labels.len(), k, cfg.dropout, &mut rng);
                let log = fit_network(&mut net, &inputs, labels, cfg)?;
                (Classifier::Edit2vec { net, vocabulary }, Some(log))
            }
            ModelSpec::Lstm(cfg) => {
                cfg.validate()?;
                let tokens = tokens_of(edits)?;
                let seqs: Vec<Vec<String>> = tokens.iter().flat_map(|(o, n)| [o.clone(), n.clone()]).collect();
                let vocabulary = build_vocabulary(&[], &seqs, cfg.min_count);
                let inputs: Vec<TokenEdit> = tokens.iter().map(|(o, n)| TokenEdit::encode(o, n, &vocabulary.tokens)).collect();
                let mut rng = stream(cfg.seed, INIT_STREAM);
                let mut net = LstmBaseline::new(vocabulary.tokens.len(), k, cfg.dropout.baseline_lstm, &mut rng);
                let log = fit_network(&mut net, &inputs, labels, cfg)?;
                (Classifier::Lstm { net, vocabulary }, Some(log))
            }
            ModelSpec::Bow(opts) => {
                let tokens = tokens_of(edits)?;
                let vectorizer = BowVectorizer::fit(&tokens, opts.mode);
                let x = vectorizer.transform_all(&tokens);
                let svm = svm_train(x.view(), labels, k, &opts.svm)?;
                let correct = svm.predict(x.view()).iter().zip(labels).filter(|(p, y)| p == y).count();
                let log = TrainingLog {
                    initial_loss: None,
                    first_epoch_loss: None,
                    epoch_losses: Vec::new(),
                    train_accuracy: correct as f64 / labels.len() as f64,
                };
                (Classifier::Bow { vectorizer, svm }, Some(log))
            }
        };
        Ok(Self {
            spec: spec.clone(),
            classes: classes.to_vec(),
            classifier,
            log,
        })
    }

    fn batch_size(&self) -> usize {
        match &self.spec {
            ModelSpec::Edit2vec(c) | ModelSpec::Lstm(c) => c.batch_size,
            ModelSpec::Bow(_) => 128,
        }
    }

    /// Class scores and the activations feeding the output layer (the
    /// feature vectors themselves for bag-of-words models).
    pub fn scores(&self, edits: &[CodeEdit]) -> Result<(Array2<f64>, Array2<f64>), ModelError> {
        match &self.classifier {
            Classifier::Edit2vec { net, vocabulary } => {
                let inputs: Vec<EncodedEdit> = contexts_of(edits)?.iter().map(|c| EncodedEdit::encode(c, vocabulary)).collect();
                Ok(infer_all(net, &inputs, self.batch_size())?)
            }
            Classifier::Lstm { net, vocabulary } => {
                let inputs: Vec<TokenEdit> = tokens_of(edits)?
                    .iter()
                    .map(|(o, n)| TokenEdit::encode(o, n, &vocabulary.tokens))
                    .collect();
                Ok(infer_all(net, &inputs, self.batch_size())?)
            }
            Classifier::Bow { vectorizer, svm } => {
                let x = vectorizer.transform_all(&tokens_of(edits)?);
                Ok((svm.decision(x.view()), x))
            }
        }
    }

    /// Softmax of the class scores, one row per edit.
    pub fn predict_proba(&self, edits: &[CodeEdit]) -> Result<Array2<f64>, ModelError> {
        let (mut s, _) = self.scores(edits)?;
        for mut row in s.axis_iter_mut(Axis(0)) {
            let p = softmax(row.view());
            row.assign(&p);
        }
        Ok(s)
    }

    pub fn predict(&self, edits: &[CodeEdit]) -> Result<Vec<usize>, ModelError> {
        Ok(argmax_rows(self.scores(edits)?.0.view()))
    }

    pub fn param_count(&self) -> usize {
        match &self.classifier {
            Classifier::Edit2vec { net, .. } => net.param_count(),
            Classifier::Lstm { net, .. } => net.param_count(),
            Classifier::Bow { svm, .. } => svm.weights.len(),
        }
    }

    fn arrays(&self) -> Vec<(String, Array2<f64>)> {
        let own = |v: Vec<(String, &crate::nncore::RealArray)>| v.into_iter().map(|(n, p)| (n, p.value.clone())).collect();
        match &self.classifier {
            Classifier::Edit2vec { net, .. } => own(net.params()),
            Classifier::Lstm { net, .. } => own(net.params()),
            Classifier::Bow { vectorizer, svm } => {
                let row = |v: &[f64]| Array1::from(v.to_vec()).insert_axis(Axis(0));
                let mut v = vec![("bow.idf".to_string(), row(&vectorizer.idf)), ("svm.weights".to_string(), svm.weights.clone())];
                if let Some(f) = &svm.features {
                    v.push(("rff.w".into(), f.w.clone()));
                    v.push(("rff.b".into(), f.b.clone().insert_axis(Axis(0))));
                }
                v
            }
        }
    }

    /// Writes the binary checkpoint and its JSON sidecar.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        let path = path.as_ref();
        let arrays = self.arrays();
        let refs: Vec<(String, &Array2<f64>)> = arrays.iter().map(|(n, a)| (n.clone(), a)).collect();
        write_checkpoint(path, &refs)?;
        let (vocabulary, bow_vocabulary) = match &self.classifier {
            Classifier::Edit2vec { vocabulary, .. } | Classifier::Lstm { vocabulary, .. } => (Some(vocabulary.clone()), None),
            Classifier::Bow { vectorizer, .. } => (None, Some(vectorizer.vocabulary.clone())),
        };
        let sidecar = Sidecar {
            spec: self.spec.clone(),
            classes: self.classes.clone(),
            vocabulary_sha256: vocabulary.as_ref().map(Vocabulary::sha256),
            vocabulary,
            bow_vocabulary,
            parameters: self.param_count(),
            training: self.log.clone(),
        };
        std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&sidecar)? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let path = path.as_ref();
        let sidecar: Sidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path(path))?)?;
        let arrays = read_checkpoint(path)?;
        let k = sidecar.classes.len();
        let mut rng = stream(0, INIT_STREAM);
        let missing = |what: &str| ModelError::Checkpoint(format!("sidecar lacks {what}"));
        let vocab = || -> Result<Vocabulary, ModelError> {
            let v = sidecar.vocabulary.clone().ok_or_else(|| missing("vocabulary"))?;
            if sidecar.vocabulary_sha256.as_deref() != Some(v.sha256().as_str()) {
                return Err(ModelError::Checkpoint("vocabulary hash mismatch".into()));
            }
            Ok(v)
        };
        let classifier = match &sidecar.spec {
            ModelSpec::Edit2vec(cfg) => {
                let vocabulary = vocab()?;
                let mut net = Edit2Vec::new(vocabulary.subtokens.len(), vocabulary.path_labels.len(), k, cfg.dropout, &mut rng);
                net.load_arrays(&arrays)?;
                Classifier::Edit2vec { net, vocabulary }
            }
            ModelSpec::Lstm(cfg) => {
                let vocabulary = vocab()?;
                let mut net = LstmBaseline::new(vocabulary.tokens.len(), k, cfg.dropout.baseline_lstm, &mut rng);
                net.load_arrays(&arrays)?;
                Classifier::Lstm { net, vocabulary }
            }
            ModelSpec::Bow(opts) => {
                let get = |name: &str| {
                    arrays
                        .iter()
                        .find(|(n, _)| n == name)
                        .map(|(_, a)| a.clone())
                        .ok_or_else(|| ModelError::Checkpoint(format!("missing array {name}")))
                };
                let vectorizer = BowVectorizer::from_parts(
                    opts.mode,
                    sidecar.bow_vocabulary.clone().ok_or_else(|| missing("bag-of-words vocabulary"))?,
                    get("bow.idf")?.row(0).to_vec(),
                );
                let features = match opts.svm.kernel {
                    Kernel::Linear => None,
                    Kernel::Rbf => Some(FourierFeatures {
                        w: get("rff.w")?,
                        b: get("rff.b")?.row(0).to_owned(),
                    }),
                };
                Classifier::Bow {
                    vectorizer,
                    svm: Svm {
                        weights: get("svm.weights")?,
                        features,
                    },
                }
            }
        };
        Ok(Self {
            spec: sidecar.spec,
            classes: sidecar.classes,
            classifier,
            log: sidecar.training,
        })
    }
}
