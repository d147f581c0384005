//! Joint-distribution test of a sampler (Geweke 2004).
//!
//! The marginal-conditional simulator draws parameters straight from the
//! prior. The successive-conditional simulator alternates a fresh network
//! given the parameters with one sampler sweep given that network. A correct
//! sampler leaves both with the same parameter marginals, so first and second
//! moments of every scalar must agree.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::math::{mean, variance};
use crate::mcmc::chain::LatentModel;
use crate::mcmc::diagnostics::batch_means_se;
use crate::mcmc::rng::chain_rng;
use crate::network::Network;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GewekeConfig {
    pub n_actors: usize,
    pub n_draws: usize,
    /// Successive-conditional sweeps spent tuning step sizes (discarded).
    pub n_adapt: usize,
    pub n_batches: usize,
    pub seed: u64,
}

impl Default for GewekeConfig {
    fn default() -> Self {
        GewekeConfig {
            n_actors: 6,
            n_draws: 50_000,
            n_adapt: 5_000,
            n_batches: 50,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GewekeStat {
    pub name: String,
    pub moment: u8,
    pub marginal_mean: f64,
    pub successive_mean: f64,
    pub z: f64,
}

pub fn geweke_test<M: LatentModel>(model: &M, cfg: &GewekeConfig) -> Result<Vec<GewekeStat>> {
    let names = model.scalar_names();
    let n_scalars = names.len();
    let template = Network::empty(cfg.n_actors);

    let mut rng = chain_rng(cfg.seed, 0);
    let mut marginal: Vec<Vec<f64>> = vec![Vec::with_capacity(cfg.n_draws); n_scalars];
    for _ in 0..cfg.n_draws {
        let state = model.sample_prior(cfg.n_actors, &mut rng);
        for (m, v) in marginal.iter_mut().zip(model.scalars(&state)) {
            m.push(v);
        }
    }

    let mut rng = chain_rng(cfg.seed, 1);
    let mut state = model.sample_prior(cfg.n_actors, &mut rng);
    let mut net = model.simulate(&state, &template, &mut rng);
    let mut tuning = model.tuning(&net, &state);
    let mut successive: Vec<Vec<f64>> = vec![Vec::with_capacity(cfg.n_draws); n_scalars];
    for it in 0..(cfg.n_adapt + cfg.n_draws) {
        model.sweep(&net, &mut state, &mut tuning, it < cfg.n_adapt, &mut rng)?;
        net = model.simulate(&state, &template, &mut rng);
        if it >= cfg.n_adapt {
            for (s, v) in successive.iter_mut().zip(model.scalars(&state)) {
                s.push(v);
            }
        }
    }

    let mut out = Vec::new();
    for (s, name) in names.iter().enumerate() {
        for moment in [1u8, 2] {
            let f = |xs: &[f64]| -> Vec<f64> { xs.iter().map(|x| x.powi(moment as i32)).collect() };
            let a = f(&marginal[s]);
            let b = f(&successive[s]);
            let se_a2 = variance(&a) / a.len() as f64;
            let se_b = batch_means_se(&b, cfg.n_batches);
            let z = (mean(&a) - mean(&b)) / (se_a2 + se_b * se_b).sqrt();
            out.push(GewekeStat {
                name: name.to_string(),
                moment,
                marginal_mean: mean(&a),
                successive_mean: mean(&b),
                z,
            });
        }
    }
    Ok(out)
}
