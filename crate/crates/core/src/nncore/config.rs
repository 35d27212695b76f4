use serde::{Deserialize, Serialize};

use super::{AdamConfig, NnError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DropoutConfig {
    pub lstm_internal: f64,
    pub pce_tanh: f64,
    pub ce_tanh: f64,
    pub classifier_tanh: f64,
    pub baseline_lstm: f64,
}

impl Default for DropoutConfig {
    fn default() -> Self {
        Self {
            lstm_internal: 0.2,
            pce_tanh: 0.2,
            ce_tanh: 0.4,
            classifier_tanh: 0.6,
            baseline_lstm: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub seed: u64,
    pub dropout: DropoutConfig,
    /// Minimum frequency for a string to get its own vocabulary id.
    pub min_count: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            batch_size: 128,
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            seed: 0,
            dropout: DropoutConfig::default(),
            min_count: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), NnError> {
        let bad = |m: String| Err(NnError::Config(m));
        if self.epochs == 0 {
            return bad("epochs must be at least 1".into());
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate {} is not positive", self.learning_rate));
        }
        for (name, b) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(0.0..1.0).contains(&b) {
                return bad(format!("{name} {b} outside [0, 1)"));
            }
        }
        if self.adam_epsilon <= 0.0 {
            return bad("adam_epsilon must be positive".into());
        }
        let d = self.dropout;
        for (name, r) in [
            ("lstm_internal", d.lstm_internal),
            ("pce_tanh", d.pce_tanh),
            ("ce_tanh", d.ce_tanh),
            ("classifier_tanh", d.classifier_tanh),
            ("baseline_lstm", d.baseline_lstm),
        ] {
            if !(0.0..1.0).contains(&r) {
                return bad(format!("dropout.{name} {r} outside [0, 1)"));
            }
        }
        if self.min_count == 0 {
            return bad("min_count must be at least 1".into());
        }
        Ok(())
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            epsilon: self.adam_epsilon,
        }
    }
}
