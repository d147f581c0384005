//! Latent distance model: `logit P(y_ij = 1) = ζ − ‖u_i − u_j‖`.
//!
//! Priors: `u_i | σ² ~ N(0, σ² I_K)`, `ζ | ω² ~ N(0, ω²)`,
//! `σ² ~ IGam(a_σ, b_σ)`, `ω² ~ IGam(a_ω, b_ω)`. Each sweep updates every
//! `u_i` and `ζ` by adaptive random-walk Metropolis, then draws σ² and ω²
//! from their inverse-gamma full conditionals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{bernoulli_logit_lpmf, logit, tie_prob};
use crate::mcmc::adaptive::{rw_metropolis_step, AdaptiveScale};
use crate::mcmc::chain::{LatentModel, PosteriorSamples};
use crate::mcmc::rng::{normal, std_normal, ChainRng, InvGamma};
use crate::models::procrustes::procrustes_align;
use crate::network::{density, Network};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceHyper {
    pub a_sigma: f64,
    pub b_sigma: f64,
    pub a_omega: f64,
    pub b_omega: f64,
    pub k: usize,
}

impl DistanceHyper {
    /// `a_ω = 2`, `b_ω = 100` and (a_σ, b_σ) from [`elicit_sigma2_prior`].
    pub fn elicited(n_actors: usize, k: usize) -> Self {
        let (a_sigma, b_sigma) = elicit_sigma2_prior(n_actors, k);
        DistanceHyper {
            a_sigma,
            b_sigma,
            a_omega: 2.0,
            b_omega: 100.0,
            k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("latent dimension K must be at least 1"));
        }
        for (name, v) in [
            ("a_sigma", self.a_sigma),
            ("b_sigma", self.b_sigma),
            ("a_omega", self.a_omega),
            ("b_omega", self.b_omega),
        ] {
            if !(v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Inverse-gamma (a, b) with coefficient of variation 1 and mean
/// `π · I^{2/K}`: a = 3, b = 2π · I^{2/K}.
pub fn elicit_sigma2_prior(n_actors: usize, k: usize) -> (f64, f64) {
    let mean = PI * (n_actors as f64).powf(2.0 / k as f64);
    (3.0, 2.0 * mean)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceState {
    pub zeta: f64,
    /// Row-major `I × K` latent positions.
    pub u: Vec<f64>,
    pub k: usize,
    pub sigma2: f64,
    pub omega2: f64,
}

impl DistanceState {
    pub fn n_actors(&self) -> usize {
        self.u.len() / self.k
    }

    #[inline]
    pub fn position(&self, i: usize) -> &[f64] {
        &self.u[i * self.k..(i + 1) * self.k]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(self.position(i), self.position(j))
    }
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `expit(ζ − ‖u_i − u_j‖)`.
pub fn prob_distance(zeta: f64, u_i: &[f64], u_j: &[f64]) -> f64 {
    tie_prob(zeta - euclidean(u_i, u_j))
}

/// Full conditional of σ²: `IGam(a_σ + IK/2, b_σ + ½ Σ ‖u_i‖²)`.
pub fn gibbs_sigma2_distance(u: &[f64], k: usize, a_sigma: f64, b_sigma: f64) -> InvGamma {
    let n = u.len() / k;
    let ss: f64 = u.iter().map(|x| x * x).sum();
    InvGamma::new(a_sigma + (n * k) as f64 / 2.0, b_sigma + 0.5 * ss)
}

/// Full conditional of ω²: `IGam(a_ω + ½, b_ω + ½ ζ²)`.
pub fn gibbs_omega2(zeta: f64, a_omega: f64, b_omega: f64) -> InvGamma {
    InvGamma::new(a_omega + 0.5, b_omega + 0.5 * zeta * zeta)
}

#[derive(Debug, Clone)]
pub struct DistanceModel {
    pub hyper: DistanceHyper,
}

#[derive(Debug, Clone)]
pub struct DistanceTuning {
    pub actors: Vec<AdaptiveScale>,
    pub zeta: AdaptiveScale,
}

impl DistanceModel {
    pub fn new(hyper: DistanceHyper) -> Result<Self> {
        hyper.validate()?;
        Ok(DistanceModel { hyper })
    }

    fn actor_loglik(&self, net: &Network, state: &DistanceState, i: usize, u_i: &[f64]) -> f64 {
        let mut ll = 0.0;
        for j in 0..net.n_actors() {
            if j != i && net.is_observed(i, j) {
                let x = state.zeta - euclidean(u_i, state.position(j));
                ll += bernoulli_logit_lpmf(net.y(i, j), x);
            }
        }
        ll
    }
}

impl LatentModel for DistanceModel {
    type State = DistanceState;
    type Tuning = DistanceTuning;

    fn name(&self) -> &'static str {
        "distance"
    }

    fn dim(&self) -> usize {
        self.hyper.k
    }

    fn init(&self, net: &Network, rng: &mut ChainRng) -> Result<DistanceState> {
        let n = net.n_actors();
        let k = self.hyper.k;
        let dyads = net.n_observed_dyads().max(1) as f64;
        let floor = 0.5 / dyads;
        let rho = density(net).unwrap_or(0.5).clamp(floor, 1.0 - floor);
        let sigma2 = prior_mean(self.hyper.a_sigma, self.hyper.b_sigma);
        let omega2 = prior_mean(self.hyper.a_omega, self.hyper.b_omega);
        let sd = sigma2.sqrt();
        Ok(DistanceState {
            zeta: logit(rho),
            u: (0..n * k).map(|_| sd * std_normal(rng)).collect(),
            k,
            sigma2,
            omega2,
        })
    }

    fn tuning(&self, net: &Network, _state: &DistanceState) -> DistanceTuning {
        DistanceTuning {
            actors: vec![AdaptiveScale::for_dim(1.0, self.hyper.k); net.n_actors()],
            zeta: AdaptiveScale::for_dim(0.5, 1),
        }
    }

    fn sweep(
        &self,
        net: &Network,
        state: &mut DistanceState,
        tuning: &mut DistanceTuning,
        adapt: bool,
        rng: &mut ChainRng,
    ) -> Result<()> {
        let n = net.n_actors();
        let k = self.hyper.k;

        // positions
        for i in 0..n {
            let mut u_i = state.position(i).to_vec();
            let inv_two_s2 = 0.5 / state.sigma2;
            {
                let st = &*state;
                rw_metropolis_step(
                    |v: &[f64]| {
                        self.actor_loglik(net, st, i, v)
                            - inv_two_s2 * v.iter().map(|x| x * x).sum::<f64>()
                    },
                    &mut u_i,
                    &mut tuning.actors[i],
                    adapt,
                    rng,
                )?;
            }
            state.u[i * k..(i + 1) * k].copy_from_slice(&u_i);
        }

        // intercept
        let dyads: Vec<(u8, f64)> = net
            .observed_dyads()
            .map(|(i, j)| (net.y(i, j), state.distance(i, j)))
            .collect();
        let inv_two_w2 = 0.5 / state.omega2;
        let mut zeta = [state.zeta];
        rw_metropolis_step(
            |z: &[f64]| {
                dyads
                    .iter()
                    .map(|&(y, d)| bernoulli_logit_lpmf(y, z[0] - d))
                    .sum::<f64>()
                    - inv_two_w2 * z[0] * z[0]
            },
            &mut zeta,
            &mut tuning.zeta,
            adapt,
            rng,
        )?;
        state.zeta = zeta[0];

        state.sigma2 =
            gibbs_sigma2_distance(&state.u, k, self.hyper.a_sigma, self.hyper.b_sigma).sample(rng);
        state.omega2 = gibbs_omega2(state.zeta, self.hyper.a_omega, self.hyper.b_omega).sample(rng);
        Ok(())
    }

    #[inline]
    fn log_odds(&self, state: &DistanceState, i: usize, j: usize) -> f64 {
        state.zeta - state.distance(i, j)
    }

    fn log_prior(&self, state: &DistanceState) -> f64 {
        let n = state.n_actors() as f64;
        let k = state.k as f64;
        let ss: f64 = state.u.iter().map(|x| x * x).sum();
        -0.5 * n * k * state.sigma2.ln() - 0.5 * ss / state.sigma2
            + InvGamma::new(self.hyper.a_sigma, self.hyper.b_sigma).ln_pdf(state.sigma2)
            - 0.5 * state.omega2.ln()
            - 0.5 * state.zeta * state.zeta / state.omega2
            + InvGamma::new(self.hyper.a_omega, self.hyper.b_omega).ln_pdf(state.omega2)
    }

    fn scalar_names(&self) -> Vec<&'static str> {
        vec!["zeta", "sigma2", "omega2"]
    }

    fn scalars(&self, state: &DistanceState) -> Vec<f64> {
        vec![state.zeta, state.sigma2, state.omega2]
    }

    fn sample_prior(&self, n_actors: usize, rng: &mut ChainRng) -> DistanceState {
        let h = &self.hyper;
        let sigma2 = InvGamma::new(h.a_sigma, h.b_sigma).sample(rng);
        let omega2 = InvGamma::new(h.a_omega, h.b_omega).sample(rng);
        let sd = sigma2.sqrt();
        let u = (0..n_actors * h.k).map(|_| sd * std_normal(rng)).collect();
        DistanceState {
            zeta: normal(0.0, omega2, rng),
            u,
            k: h.k,
            sigma2,
            omega2,
        }
    }

    fn acceptance(&self, tuning: &DistanceTuning) -> Vec<(String, f64)> {
        let n = tuning.actors.len().max(1) as f64;
        let u = tuning.actors.iter().map(|s| s.acceptance_rate()).sum::<f64>() / n;
        vec![
            ("u".to_string(), u),
            ("zeta".to_string(), tuning.zeta.acceptance_rate()),
        ]
    }

    fn columns(&self, n_actors: usize) -> Vec<String> {
        let mut cols: Vec<String> = self.scalar_names().iter().map(|s| s.to_string()).collect();
        for i in 0..n_actors {
            for d in 0..self.hyper.k {
                cols.push(format!("u_{i}_{d}"));
            }
        }
        cols
    }

    fn flatten(&self, state: &DistanceState) -> Vec<f64> {
        let mut row = vec![state.zeta, state.sigma2, state.omega2];
        row.extend_from_slice(&state.u);
        row
    }

    fn unflatten(&self, n_actors: usize, row: &[f64]) -> Result<DistanceState> {
        let k = self.hyper.k;
        if row.len() != 3 + n_actors * k {
            return Err(Error::Dimension(format!(
                "distance row has {} values, expected {}",
                row.len(),
                3 + n_actors * k
            )));
        }
        Ok(DistanceState {
            zeta: row[0],
            sigma2: row[1],
            omega2: row[2],
            u: row[3..].to_vec(),
            k,
        })
    }
}

fn prior_mean(a: f64, b: f64) -> f64 {
    if a > 1.0 {
        b / (a - 1.0)
    } else {
        b
    }
}

/// Subtracts column means from a row-major `n × k` matrix.
pub fn center_columns(u: &mut [f64], k: usize) {
    let n = u.len() / k;
    for d in 0..k {
        let m = (0..n).map(|i| u[i * k + d]).sum::<f64>() / n as f64;
        for i in 0..n {
            u[i * k + d] -= m;
        }
    }
}

/// Centres every retained configuration and rotates/reflects it onto the
/// first retained configuration of the first chain.
pub fn align_samples(
    samples: &PosteriorSamples<DistanceState>,
) -> Result<PosteriorSamples<DistanceState>> {
    let first = samples
        .states()
        .next()
        .ok_or(Error::Empty("no retained distance-model states"))?;
    let k = first.k;
    let n = first.n_actors();
    let mut reference = first.u.clone();
    center_columns(&mut reference, k);

    let mut out = samples.clone();
    for chain in &mut out.chains {
        for state in &mut chain.states {
            let mut u = std::mem::take(&mut state.u);
            center_columns(&mut u, k);
            let fit = procrustes_align(&u, &reference, n, k)?;
            state.u = fit.aligned;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionSummary {
    pub actor: usize,
    pub dim: usize,
    pub posterior_mean: f64,
    pub q025: f64,
    pub q975: f64,
}

/// Per-actor, per-dimension posterior mean and 95% interval of (already
/// aligned) positions.
pub fn summarize_positions(states: &[&DistanceState]) -> Result<Vec<PositionSummary>> {
    let first = states.first().ok_or(Error::Empty("no states to summarize"))?;
    let (n, k) = (first.n_actors(), first.k);
    let mut out = Vec::with_capacity(n * k);
    for i in 0..n {
        for d in 0..k {
            let mut v: Vec<f64> = states.iter().map(|s| s.u[i * k + d]).collect();
            v.sort_by(f64::total_cmp);
            out.push(PositionSummary {
                actor: i,
                dim: d,
                posterior_mean: crate::math::mean(&v),
                q025: crate::math::quantile(&v, 0.025),
                q975: crate::math::quantile(&v, 0.975),
            });
        }
    }
    Ok(out)
}
