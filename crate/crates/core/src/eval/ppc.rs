//! Posterior predictive checks on network statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{mean, quantile};
use crate::mcmc::chain::LatentModel;
use crate::mcmc::rng::chain_rng;
use crate::network::{degree_assortativity, density, transitivity, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PpcStatistic {
    Density,
    Transitivity,
    Assortativity,
}

impl PpcStatistic {
    pub const DEFAULT: [PpcStatistic; 3] = [
        PpcStatistic::Density,
        PpcStatistic::Transitivity,
        PpcStatistic::Assortativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PpcStatistic::Density => "density",
            PpcStatistic::Transitivity => "transitivity",
            PpcStatistic::Assortativity => "assortativity",
        }
    }

    pub fn compute(self, net: &Network) -> Result<f64> {
        match self {
            PpcStatistic::Density => density(net),
            PpcStatistic::Transitivity => transitivity(net),
            PpcStatistic::Assortativity => degree_assortativity(net),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpcRecord {
    pub stat: String,
    pub observed: Option<f64>,
    pub mean: f64,
    pub q025: f64,
    pub q975: f64,
    pub q005: f64,
    pub q995: f64,
    pub n_replicates: usize,
    /// Replicates on which the statistic was undefined.
    pub n_dropped: usize,
}

impl PpcRecord {
    pub fn inside_95(&self) -> Option<bool> {
        self.observed.map(|o| self.q025 <= o && o <= self.q975)
    }

    pub fn inside_99(&self) -> Option<bool> {
        self.observed.map(|o| self.q005 <= o && o <= self.q995)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpcReport {
    pub records: Vec<PpcRecord>,
    pub warnings: Vec<String>,
}

/// Evenly spaced indices of at most `max` out of `len`.
pub fn thin_indices(len: usize, max: usize) -> Vec<usize> {
    if len <= max {
        return (0..len).collect();
    }
    (0..max).map(|t| t * len / max).collect()
}

/// Simulates one complete replicate network per (thinned) retained state
/// and summarizes each statistic by its mean and 95% / 99% equal-tailed
/// intervals.
pub fn posterior_predictive<M: LatentModel>(
    model: &M,
    states: &[&M::State],
    net: &Network,
    stats: &[PpcStatistic],
    max_replicates: usize,
    seed: u64,
) -> Result<PpcReport> {
    if states.is_empty() {
        return Err(Error::Empty("no retained states for predictive checks"));
    }
    let mut warnings = Vec::new();
    if states.len() < 200 {
        warnings.push(format!(
            "only {} retained states; predictive intervals are coarse",
            states.len()
        ));
    }
    let template = Network::empty(net.n_actors());
    let picks = thin_indices(states.len(), max_replicates.max(1));
    let values: Vec<Vec<Option<f64>>> = picks
        .par_iter()
        .enumerate()
        .map(|(r, &s)| {
            let mut rng = chain_rng(seed, r as u64);
            let rep = model.simulate(states[s], &template, &mut rng);
            stats.iter().map(|st| st.compute(&rep).ok()).collect()
        })
        .collect();

    let mut records = Vec::new();
    for (k, st) in stats.iter().enumerate() {
        let mut v: Vec<f64> = values.iter().filter_map(|row| row[k]).collect();
        let dropped = values.len() - v.len();
        if dropped > 0 {
            warnings.push(format!(
                "{}: undefined on {dropped} of {} replicates",
                st.name(),
                values.len()
            ));
        }
        if v.is_empty() {
            continue;
        }
        v.sort_by(f64::total_cmp);
        records.push(PpcRecord {
            stat: st.name().to_string(),
            observed: st.compute(net).ok(),
            mean: mean(&v),
            q025: quantile(&v, 0.025),
            q975: quantile(&v, 0.975),
            q005: quantile(&v, 0.005),
            q995: quantile(&v, 0.995),
            n_replicates: v.len(),
            n_dropped: dropped,
        });
    }
    Ok(PpcReport { records, warnings })
}

/// `stat,observed,mean,q025,q975,q005,q995`; undefined observations as `NA`.
pub fn ppc_csv(records: &[PpcRecord]) -> String {
    let mut s = String::from("stat,observed,mean,q025,q975,q005,q995\n");
    for r in records {
        let obs = r.observed.map_or_else(|| "NA".to_string(), |o| o.to_string());
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.stat, obs, r.mean, r.q025, r.q975, r.q005, r.q995
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thinning_is_even_and_bounded() {
        assert_eq!(thin_indices(5, 10), vec![0, 1, 2, 3, 4]);
        let idx = thin_indices(10_000, 2_000);
        assert_eq!(idx.len(), 2_000);
        assert_eq!(idx[1], 5);
    }
}
