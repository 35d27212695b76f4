use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::models::{BowMode, BowOptions, Kernel, SvmConfig};
use crate::nncore::TrainConfig;

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "EDITVEC_SEED";

/// Flat JSON configuration file. Every key is optional; flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub learning_rate: Option<f64>,
    pub adam_beta1: Option<f64>,
    pub adam_beta2: Option<f64>,
    pub adam_epsilon: Option<f64>,
    pub min_count: Option<usize>,
    pub dropout_lstm_internal: Option<f64>,
    pub dropout_pce_tanh: Option<f64>,
    pub dropout_ce_tanh: Option<f64>,
    pub dropout_classifier_tanh: Option<f64>,
    pub dropout_baseline_lstm: Option<f64>,
    pub bow_mode: Option<BowMode>,
    pub kernel: Option<Kernel>,
    pub c: Option<f64>,
    pub gamma: Option<f64>,
    pub svm_epochs: Option<usize>,
    pub rff_dim: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Later values override earlier ones key by key.
    pub fn merge(self, over: ConfigFile) -> ConfigFile {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigFile { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            seed,
            epochs,
            batch_size,
            learning_rate,
            adam_beta1,
            adam_beta2,
            adam_epsilon,
            min_count,
            dropout_lstm_internal,
            dropout_pce_tanh,
            dropout_ce_tanh,
            dropout_classifier_tanh,
            dropout_baseline_lstm,
            bow_mode,
            kernel,
            c,
            gamma,
            svm_epochs,
            rff_dim
        )
    }

    /// The configured seed, else `EDITVEC_SEED`, else 0.
    pub fn resolved_seed(&self) -> Result<u64, CliError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
            Err(_) => Ok(0),
        }
    }

    pub fn train_config(&self) -> Result<TrainConfig, CliError> {
        let d = TrainConfig::default();
        let mut dropout = d.dropout;
        dropout.lstm_internal = self.dropout_lstm_internal.unwrap_or(dropout.lstm_internal);
        dropout.pce_tanh = self.dropout_pce_tanh.unwrap_or(dropout.pce_tanh);
        dropout.ce_tanh = self.dropout_ce_tanh.unwrap_or(dropout.ce_tanh);
        dropout.classifier_tanh = self.dropout_classifier_tanh.unwrap_or(dropout.classifier_tanh);
        dropout.baseline_lstm = self.dropout_baseline_lstm.unwrap_or(dropout.baseline_lstm);
        let cfg = TrainConfig {
            epochs: self.epochs.unwrap_or(d.epochs),
            batch_size: self.batch_size.unwrap_or(d.batch_size),
            learning_rate: self.learning_rate.unwrap_or(d.learning_rate),
            adam_beta1: self.adam_beta1.unwrap_or(d.adam_beta1),
            adam_beta2: self.adam_beta2.unwrap_or(d.adam_beta2),
            adam_epsilon: self.adam_epsilon.unwrap_or(d.adam_epsilon),
            seed: self.resolved_seed()?,
            dropout,
            min_count: self.min_count.unwrap_or(d.min_count),
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }

    pub fn bow_options(&self) -> Result<BowOptions, CliError> {
        let d = SvmConfig::default();
        Ok(BowOptions {
            mode: self.bow_mode.unwrap_or(BowMode::Count),
            svm: SvmConfig {
                kernel: self.kernel.unwrap_or(d.kernel),
                c: self.c.unwrap_or(d.c),
                gamma: self.gamma.or(d.gamma),
                epochs: self.svm_epochs.unwrap_or(d.epochs),
                rff_dim: self.rff_dim.unwrap_or(d.rff_dim),
                seed: self.resolved_seed()?,
            },
        })
    }
}
