//! Run configuration: a flat JSON file overridden by command-line flags.

use std::path::{Path, PathBuf};

use latspace::{McmcConfig, ModelKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: String,
    pub input: Option<String>,
    pub model: ModelKind,
    #[serde(rename = "K")]
    pub k: usize,
    /// Partial hyperparameter object merged over the model defaults.
    pub hyper: Option<serde_json::Value>,
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub n_chains: usize,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub n_folds: usize,
    /// Relative cost of the partition point estimate.
    pub rel_cost: f64,
    pub max_replicates: usize,
    /// Directory of an earlier `fit` for `gof`.
    pub samples: Option<PathBuf>,
    pub refit: bool,
    pub models: Vec<ModelKind>,
    pub ks: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mcmc = McmcConfig::default();
        RunConfig {
            command: String::new(),
            input: None,
            model: ModelKind::Distance,
            k: 2,
            hyper: None,
            n_iter: mcmc.n_iter,
            burn_in: mcmc.burn_in,
            thin: mcmc.thin,
            n_chains: mcmc.n_chains,
            seed: mcmc.seed,
            output_dir: None,
            n_folds: 5,
            rel_cost: 0.5,
            max_replicates: 2000,
            samples: None,
            refit: false,
            models: ModelKind::ALL.to_vec(),
            ks: vec![2, 4, 8],
        }
    }
}

impl RunConfig {
    /// Reads a flat config, or the `run` entry of a manifest written by an
    /// earlier command.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        if let Some(run) = value.get_mut("run") {
            value = run.take();
        }
        serde_json::from_value(value)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn mcmc(&self, keep_states: bool) -> McmcConfig {
        McmcConfig {
            n_iter: self.n_iter,
            burn_in: self.burn_in,
            thin: self.thin,
            n_chains: self.n_chains,
            seed: self.seed,
            adapt_during_burnin: true,
            keep_states,
            keep_dyad_loglik: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.mcmc(false).validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if self.k == 0 {
            return Err(CliError::Usage("K must be at least 1".into()));
        }
        if self.ks.contains(&0) {
            return Err(CliError::Usage("every K in the list must be at least 1".into()));
        }
        if self.n_folds < 2 {
            return Err(CliError::Usage("n_folds must be at least 2".into()));
        }
        if !(self.rel_cost > 0.0 && self.rel_cost < 1.0) {
            return Err(CliError::Usage("rel_cost must lie in (0, 1)".into()));
        }
        if self.models.is_empty() || self.ks.is_empty() {
            return Err(CliError::Usage("compare needs at least one model and one K".into()));
        }
        Ok(())
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("latspace_out"))
    }
}
