//! Information criteria from per-dyad log-likelihoods.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{bernoulli_logit_lpmf, log_sum_exp};
use crate::mcmc::chain::PointwiseAccumulator;
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waic {
    pub waic: f64,
    pub p_waic: f64,
    /// `Σ_d log E[p(y_d | ·)]`.
    pub lppd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dic {
    pub dic: f64,
    pub p_dic: f64,
}

/// WAIC from per-dyad `log E[p]` and `E[log p]`:
/// `p_WAIC = 2 Σ (lppd_d − mean_d)`, `WAIC = −2 Σ lppd_d + 2 p_WAIC`.
pub fn waic_from_parts(log_mean_lik: &[f64], mean_loglik: &[f64]) -> Result<Waic> {
    if log_mean_lik.len() != mean_loglik.len() {
        return Err(Error::Dimension("WAIC inputs over different dyads".into()));
    }
    if log_mean_lik.is_empty() {
        return Err(Error::Empty("no dyads for WAIC"));
    }
    let lppd: f64 = log_mean_lik.iter().sum();
    let p_waic = 2.0 * log_mean_lik
        .iter()
        .zip(mean_loglik)
        .map(|(a, b)| a - b)
        .sum::<f64>();
    Ok(Waic {
        waic: -2.0 * lppd + 2.0 * p_waic,
        p_waic,
        lppd,
    })
}

/// WAIC of a retained-sample × dyad log-likelihood matrix.
pub fn waic(ll: &[Vec<f64>]) -> Result<Waic> {
    let b = ll.len();
    if b == 0 || ll[0].is_empty() {
        return Err(Error::Empty("empty log-likelihood matrix"));
    }
    let n = ll[0].len();
    if ll.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("ragged log-likelihood matrix".into()));
    }
    let mut lml = Vec::with_capacity(n);
    let mut ml = Vec::with_capacity(n);
    let mut column = vec![0.0; b];
    for d in 0..n {
        for (c, row) in column.iter_mut().zip(ll) {
            *c = row[d];
        }
        lml.push(log_sum_exp(&column) - (b as f64).ln());
        ml.push(column.iter().sum::<f64>() / b as f64);
    }
    waic_from_parts(&lml, &ml)
}

pub fn waic_from_accumulator(acc: &PointwiseAccumulator) -> Result<Waic> {
    if acc.count() == 0 {
        return Err(Error::Empty("no retained samples"));
    }
    waic_from_parts(&acc.log_mean_lik(), &acc.mean_loglik())
}

/// DIC from the per-dyad posterior mean log-likelihood and the per-dyad
/// log-likelihood at the plug-in estimate:
/// `p_DIC = 2 log p(Y | Υ̂) − 2 E[log p(Y | Υ)]`, `DIC = −2 log p(Y | Υ̂) + 2 p_DIC`.
pub fn dic_from_parts(mean_loglik: &[f64], ll_at_estimate: &[f64]) -> Result<Dic> {
    if mean_loglik.len() != ll_at_estimate.len() {
        return Err(Error::Dimension("DIC inputs over different dyads".into()));
    }
    if mean_loglik.is_empty() {
        return Err(Error::Empty("no dyads for DIC"));
    }
    let plug: f64 = ll_at_estimate.iter().sum();
    let expected: f64 = mean_loglik.iter().sum();
    let p_dic = 2.0 * plug - 2.0 * expected;
    Ok(Dic {
        dic: -2.0 * plug + 2.0 * p_dic,
        p_dic,
    })
}

pub fn dic(ll: &[Vec<f64>], ll_at_estimate: &[f64]) -> Result<Dic> {
    if ll.is_empty() {
        return Err(Error::Empty("empty log-likelihood matrix"));
    }
    let n = ll_at_estimate.len();
    if ll.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("DIC inputs over different dyads".into()));
    }
    let b = ll.len() as f64;
    let mean: Vec<f64> = (0..n)
        .map(|d| ll.iter().map(|row| row[d]).sum::<f64>() / b)
        .collect();
    dic_from_parts(&mean, ll_at_estimate)
}

/// Per-dyad log-likelihood at plug-in log-odds `log_odds` (row-major upper
/// triangle over all dyads), restricted to `dyads`.
pub fn loglik_at_log_odds(net: &Network, dyads: &[(usize, usize)], log_odds: &[f64]) -> Vec<f64> {
    let n = net.n_actors();
    dyads
        .iter()
        .map(|&(i, j)| bernoulli_logit_lpmf(net.y(i, j), log_odds[crate::network::dyad_index(i, j, n)]))
        .collect()
}
