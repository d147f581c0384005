//! Model assessment: information criteria, cross-validated AUC and
//! posterior predictive checks.

pub mod auc;
pub mod cv;
pub mod ic;
pub mod ppc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mcmc::chain::PosteriorSamples;
use crate::network::Network;

pub use auc::roc_auc;
pub use cv::{assign_folds, cross_validate, CvReport};
pub use ic::{dic, dic_from_parts, waic, waic_from_accumulator, Dic, Waic};
pub use ppc::{posterior_predictive, ppc_csv, PpcRecord, PpcReport, PpcStatistic};

/// Everything reported about one fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model: String,
    pub k: usize,
    pub n_samples: usize,
    pub waic: f64,
    pub p_waic: f64,
    pub dic: f64,
    pub p_dic: f64,
    pub in_sample_auc: Option<f64>,
    pub auc_per_fold: Vec<f64>,
    pub auc_mean: Option<f64>,
    pub ppc: Vec<PpcRecord>,
    pub warnings: Vec<String>,
}

/// WAIC, DIC and in-sample AUC of a fit.
///
/// DIC plugs in the posterior mean log-odds of every dyad. Unlike posterior
/// mean latent variables it is unaffected by label switching, rotations and
/// sign flips, and concavity of the Bernoulli log-likelihood in the log-odds
/// keeps `p_DIC ≥ 0`. (Plugging in mean probabilities instead would make DIC
/// coincide with WAIC for binary data.)
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitScores {
    pub waic: Waic,
    pub dic: Dic,
    pub in_sample_auc: Option<f64>,
}

pub fn score_fit<S>(samples: &PosteriorSamples<S>, net: &Network) -> Result<FitScores> {
    let acc = samples.pointwise();
    let waic = waic_from_accumulator(&acc)?;
    let plug = ic::loglik_at_log_odds(net, &samples.dyads, &samples.mean_log_odds());
    let dic = dic_from_parts(&acc.mean_loglik(), &plug)?;
    Ok(FitScores {
        waic,
        dic,
        in_sample_auc: in_sample_auc(samples, net).ok(),
    })
}

/// AUC of posterior mean tie probabilities against the observed ties.
pub fn in_sample_auc<S>(samples: &PosteriorSamples<S>, net: &Network) -> Result<f64> {
    let probs = samples.mean_probs();
    let n = net.n_actors();
    let scores: Vec<f64> = samples
        .dyads
        .iter()
        .map(|&(i, j)| probs[crate::network::dyad_index(i, j, n)])
        .collect();
    let labels: Vec<bool> = samples.dyads.iter().map(|&(i, j)| net.has_edge(i, j)).collect();
    roc_auc(&scores, &labels)
}
