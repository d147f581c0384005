//! `latspace`: fit and assess latent space models of undirected networks.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latspace::ModelKind;

use crate::config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, bad configuration or unreadable input: exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Failure while running: exit code 1.
    #[error(transparent)]
    Runtime(#[from] latspace::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(version, about = "Bayesian latent space models for undirected binary networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Descriptive statistics of a network
    Describe(Common),
    /// Run the MCMC sampler and export samples and summaries
    Fit(Common),
    /// K-fold cross-validated AUC of tie prediction
    Cv(Common),
    /// WAIC, DIC and posterior predictive checks
    Gof(Common),
    /// WAIC over a grid of models and latent dimensions
    Compare(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Edge-list file, or a bundled network name (zach, florentine)
    input: Option<String>,

    /// Flat JSON config (or a manifest from an earlier run); flags win
    #[arg(long)]
    config: Option<PathBuf>,

    /// distance, class or eigen
    #[arg(short, long)]
    model: Option<ModelKind>,

    /// Latent dimension, or number of classes
    #[arg(short = 'k', long = "dim")]
    k: Option<usize>,

    /// JSON object of hyperparameters overriding the defaults
    #[arg(long)]
    hyper: Option<String>,

    #[arg(long)]
    n_iter: Option<usize>,

    #[arg(long)]
    burn_in: Option<usize>,

    #[arg(long)]
    thin: Option<usize>,

    #[arg(long)]
    chains: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    /// Output directory
    #[arg(short, long, env = "LATSPACE_OUT")]
    out: Option<PathBuf>,

    /// Number of cross-validation folds
    #[arg(long)]
    folds: Option<usize>,

    /// Relative cost of the partition point estimate (class model)
    #[arg(long)]
    rel_cost: Option<f64>,

    /// Cap on posterior predictive replicates
    #[arg(long)]
    max_replicates: Option<usize>,

    /// Directory holding the samples of an earlier `fit`
    #[arg(long)]
    samples: Option<PathBuf>,

    /// Refit instead of reading samples (gof)
    #[arg(long)]
    refit: bool,

    /// Comma-separated models for compare
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<ModelKind>>,

    /// Comma-separated latent dimensions for compare
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
}

impl Common {
    fn into_config(self, command: &str) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        cfg.command = command.to_string();
        macro_rules! set {
            ($($flag:ident => $field:ident),*) => {
                $(if let Some(v) = self.$flag { cfg.$field = v; })*
            };
        }
        set!(model => model, k => k, n_iter => n_iter, burn_in => burn_in, thin => thin,
             chains => n_chains, seed => seed, folds => n_folds, rel_cost => rel_cost,
             max_replicates => max_replicates, models => models, ks => ks);
        if self.input.is_some() {
            cfg.input = self.input;
        }
        if self.out.is_some() {
            cfg.output_dir = self.out;
        }
        if self.samples.is_some() {
            cfg.samples = self.samples;
        }
        if let Some(h) = self.hyper {
            let value = serde_json::from_str(&h)
                .map_err(|e| CliError::Usage(format!("--hyper is not valid JSON: {e}")))?;
            cfg.hyper = Some(value);
        }
        cfg.refit |= self.refit;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, common) = match cli.command {
        Command::Describe(c) => ("describe", c),
        Command::Fit(c) => ("fit", c),
        Command::Cv(c) => ("cv", c),
        Command::Gof(c) => ("gof", c),
        Command::Compare(c) => ("compare", c),
    };
    let cfg = common.into_config(name)?;
    match name {
        "describe" => commands::describe(&cfg),
        "fit" => commands::fit(&cfg),
        "cv" => commands::cv(&cfg),
        "gof" => commands::gof(&cfg),
        _ => commands::compare(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
