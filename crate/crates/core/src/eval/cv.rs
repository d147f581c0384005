//! K-fold cross-validation of tie prediction by likelihood masking.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::auc::roc_auc;
use crate::mcmc::chain::{run_chains, LatentModel, McmcConfig};
use crate::mcmc::rng::{chain_rng, derive_seed};
use crate::network::{dyad_index, Network};

/// Stream index reserved for the fold shuffle, away from chain streams.
const FOLD_STREAM: u64 = 0xF01D;

/// Splits `dyads` uniformly at random into `n_folds` sets whose sizes differ
/// by at most one.
pub fn assign_folds(
    dyads: &[(usize, usize)],
    n_folds: usize,
    seed: u64,
) -> Result<Vec<Vec<(usize, usize)>>> {
    if n_folds < 2 {
        return Err(Error::invalid("cross-validation needs at least two folds"));
    }
    if dyads.len() < n_folds {
        return Err(Error::invalid(format!(
            "{} dyads cannot fill {n_folds} folds",
            dyads.len()
        )));
    }
    let mut shuffled = dyads.to_vec();
    shuffled.shuffle(&mut chain_rng(seed, FOLD_STREAM));
    let mut folds = vec![Vec::new(); n_folds];
    for (t, d) in shuffled.into_iter().enumerate() {
        folds[t % n_folds].push(d);
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub n_folds: usize,
    pub fold_sizes: Vec<usize>,
    pub auc_per_fold: Vec<f64>,
    pub auc_mean: f64,
}

/// Refits `model` once per fold with that fold's dyads masked and scores
/// the held-out dyads by their posterior mean tie probability.
pub fn cross_validate<M: LatentModel>(
    model: &M,
    net: &Network,
    cfg: &McmcConfig,
    n_folds: usize,
    seed: u64,
) -> Result<CvReport> {
    let dyads: Vec<(usize, usize)> = net.observed_dyads().collect();
    let folds = assign_folds(&dyads, n_folds, seed)?;
    let n = net.n_actors();
    let aucs = folds
        .par_iter()
        .enumerate()
        .map(|(f, held_out)| {
            if held_out.is_empty() {
                return Err(Error::Empty("cross-validation fold without dyads"));
            }
            let train = net.masked(held_out);
            let fold_cfg = McmcConfig {
                seed: derive_seed(cfg.seed, 1 + f as u64),
                keep_states: false,
                keep_dyad_loglik: false,
                ..cfg.clone()
            };
            let post = run_chains(model, &train, &fold_cfg)?;
            let probs = post.mean_probs();
            let scores: Vec<f64> = held_out
                .iter()
                .map(|&(i, j)| probs[dyad_index(i, j, n)])
                .collect();
            let labels: Vec<bool> = held_out.iter().map(|&(i, j)| net.has_edge(i, j)).collect();
            roc_auc(&scores, &labels)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CvReport {
        n_folds,
        fold_sizes: folds.iter().map(Vec::len).collect(),
        auc_mean: crate::math::mean(&aucs),
        auc_per_fold: aucs,
    })
}
