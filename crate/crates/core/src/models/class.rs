//! Latent class (stochastic block) model:
//! `logit P(y_ij = 1) = η_{φ(ξ_i, ξ_j)}` with `φ(a, b) = (min, max)`.
//!
//! Priors: `η_{kℓ} | ζ, τ² ~ N(ζ, τ²)` for `k ≤ ℓ`, `ξ_i | ω ~ Cat(ω)`,
//! `ω | α ~ Dir(α/K, …, α/K)`, `ζ ~ N(μ_ζ, σ²_ζ)`, `τ² ~ IGam(a_τ, b_τ)`,
//! `α ~ Gam(a_α, b_α)` (rate parametrization).
//!
//! Labels are 0-based internally and 1-based in every export.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::math::{logit, softplus, tie_prob};
use crate::mcmc::adaptive::{log_scale_metropolis_step, rw_metropolis_step, AdaptiveScale};
use crate::mcmc::chain::LatentModel;
use crate::mcmc::rng::{categorical_log, dirichlet, normal, ChainRng, InvGamma};
use crate::network::{density, Network};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassHyper {
    pub mu_zeta: f64,
    pub sigma2_zeta: f64,
    pub a_tau: f64,
    pub b_tau: f64,
    pub a_alpha: f64,
    pub b_alpha: f64,
    pub k: usize,
}

impl ClassHyper {
    /// μ_ζ = 0, σ²_ζ = 3, a_τ = 2, b_τ = 3, a_α = b_α = 1.
    pub fn standard(k: usize) -> Self {
        ClassHyper {
            mu_zeta: 0.0,
            sigma2_zeta: 3.0,
            a_tau: 2.0,
            b_tau: 3.0,
            a_alpha: 1.0,
            b_alpha: 1.0,
            k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("number of classes K must be at least 1"));
        }
        for (name, v) in [
            ("sigma2_zeta", self.sigma2_zeta),
            ("a_tau", self.a_tau),
            ("b_tau", self.b_tau),
            ("a_alpha", self.a_alpha),
            ("b_alpha", self.b_alpha),
        ] {
            if !(v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn n_blocks(&self) -> usize {
        self.k * (self.k + 1) / 2
    }
}

/// Ordered block pair `(min, max)` for 0-based labels below `k`.
pub fn phi(a: usize, b: usize, k: usize) -> Result<(usize, usize)> {
    if a >= k || b >= k {
        return Err(Error::invalid(format!("label out of range for K = {k}")));
    }
    Ok((a.min(b), a.max(b)))
}

/// Position of block `(k, l)`, `k ≤ l`, in the packed upper triangle.
#[inline]
pub fn block_index(k: usize, l: usize, n_classes: usize) -> usize {
    let (a, b) = (k.min(l), k.max(l));
    a * (2 * n_classes + 1 - a) / 2 + (b - a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassState {
    pub xi: Vec<usize>,
    /// Packed upper triangle of the `K × K` block log-odds.
    pub eta: Vec<f64>,
    pub omega: Vec<f64>,
    pub zeta: f64,
    pub tau2: f64,
    pub alpha: f64,
    pub k: usize,
}

impl ClassState {
    #[inline]
    pub fn eta_at(&self, a: usize, b: usize) -> f64 {
        self.eta[block_index(a, b, self.k)]
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut n = vec![0; self.k];
        for &x in &self.xi {
            n[x] += 1;
        }
        n
    }
}

/// `expit(η_{φ(a, b)})`.
pub fn prob_class(eta: &[f64], k: usize, a: usize, b: usize) -> Result<f64> {
    let (lo, hi) = phi(a, b, k)?;
    Ok(tie_prob(eta[block_index(lo, hi, k)]))
}

/// Ties `s_{kℓ}` and dyad counts `n_{kℓ}` per block over observed dyads.
pub fn block_stats(net: &Network, xi: &[usize], k: usize) -> (Vec<f64>, Vec<f64>) {
    let nb = k * (k + 1) / 2;
    let mut s = vec![0.0; nb];
    let mut n = vec![0.0; nb];
    for (i, j) in net.observed_dyads() {
        let b = block_index(xi[i], xi[j], k);
        n[b] += 1.0;
        s[b] += f64::from(net.y(i, j));
    }
    (s, n)
}

/// `s η − n log(1 + e^η) − (η − ζ)² / (2τ²)`.
pub fn eta_log_conditional(eta: f64, s: f64, n: f64, zeta: f64, tau2: f64) -> f64 {
    s * eta - n * softplus(eta) - (eta - zeta).powi(2) / (2.0 * tau2)
}

/// Metropolis update of every block log-odds; blocks without dyads are
/// drawn from their prior.
pub fn mh_update_eta(
    net: &Network,
    state: &mut ClassState,
    scales: &mut [AdaptiveScale],
    adapt: bool,
    rng: &mut ChainRng,
) -> Result<()> {
    let (s, n) = block_stats(net, &state.xi, state.k);
    for b in 0..state.eta.len() {
        if n[b] == 0.0 {
            state.eta[b] = normal(state.zeta, state.tau2, rng);
            continue;
        }
        let (sb, nb, zeta, tau2) = (s[b], n[b], state.zeta, state.tau2);
        let mut x = [state.eta[b]];
        rw_metropolis_step(
            |v: &[f64]| eta_log_conditional(v[0], sb, nb, zeta, tau2),
            &mut x,
            &mut scales[b],
            adapt,
            rng,
        )?;
        state.eta[b] = x[0];
    }
    Ok(())
}

/// Log-weights of `ξ_i = k`, unnormalized.
pub fn xi_log_weights(net: &Network, state: &ClassState, i: usize) -> Vec<f64> {
    let k = state.k;
    let mut ties = vec![0.0; k];
    let mut dyads = vec![0.0; k];
    for j in 0..net.n_actors() {
        if j != i && net.is_observed(i, j) {
            dyads[state.xi[j]] += 1.0;
            ties[state.xi[j]] += f64::from(net.y(i, j));
        }
    }
    (0..k)
        .map(|c| {
            let mut lw = state.omega[c].ln();
            for other in 0..k {
                if dyads[other] > 0.0 {
                    let e = state.eta_at(c, other);
                    lw += ties[other] * e - dyads[other] * softplus(e);
                }
            }
            lw
        })
        .collect()
}

/// Normalized full conditional of `ξ_i`.
pub fn xi_conditional(net: &Network, state: &ClassState, i: usize) -> Vec<f64> {
    crate::mcmc::rng::normalize_log_weights(&xi_log_weights(net, state, i))
}

/// Sequential Gibbs scan over all labels.
pub fn gibbs_xi(net: &Network, state: &mut ClassState, rng: &mut ChainRng) {
    for i in 0..net.n_actors() {
        let lw = xi_log_weights(net, state, i);
        state.xi[i] = categorical_log(&lw, rng);
    }
}

/// Dirichlet parameters `α/K + n_k`.
pub fn omega_conditional(xi: &[usize], alpha: f64, k: usize) -> Vec<f64> {
    let mut conc = vec![alpha / k as f64; k];
    for &x in xi {
        conc[x] += 1.0;
    }
    conc
}

pub fn gibbs_omega<R: Rng + ?Sized>(xi: &[usize], alpha: f64, k: usize, rng: &mut R) -> Vec<f64> {
    dirichlet(&omega_conditional(xi, alpha, k), rng)
}

/// Mean and variance of the normal full conditional of ζ.
pub fn zeta_conditional(eta: &[f64], hyper: &ClassHyper, tau2: f64) -> (f64, f64) {
    let n_blocks = eta.len() as f64;
    let v2 = 1.0 / (1.0 / hyper.sigma2_zeta + n_blocks / tau2);
    let m = v2 * (hyper.mu_zeta / hyper.sigma2_zeta + eta.iter().sum::<f64>() / tau2);
    (m, v2)
}

pub fn gibbs_zeta_class<R: Rng + ?Sized>(
    eta: &[f64],
    hyper: &ClassHyper,
    tau2: f64,
    rng: &mut R,
) -> f64 {
    let (m, v2) = zeta_conditional(eta, hyper, tau2);
    normal(m, v2, rng)
}

/// `IGam(a_τ + K(K+1)/4, b_τ + ½ Σ_{k≤ℓ} (η_{kℓ} − ζ)²)`.
pub fn tau2_conditional(eta: &[f64], zeta: f64, hyper: &ClassHyper) -> InvGamma {
    let ss: f64 = eta.iter().map(|e| (e - zeta).powi(2)).sum();
    InvGamma::new(hyper.a_tau + eta.len() as f64 / 2.0, hyper.b_tau + 0.5 * ss)
}

pub fn gibbs_tau2<R: Rng + ?Sized>(eta: &[f64], zeta: f64, hyper: &ClassHyper, rng: &mut R) -> f64 {
    tau2_conditional(eta, zeta, hyper).sample(rng)
}

/// `log Γ(α) − K log Γ(α/K) + (α/K) Σ log ω_k + (a_α − 1) log α − b_α α`.
pub fn alpha_log_conditional(alpha: f64, omega: &[f64], hyper: &ClassHyper) -> f64 {
    if !(alpha > 0.0) {
        return f64::NEG_INFINITY;
    }
    let k = omega.len() as f64;
    let sum_log_omega: f64 = omega.iter().map(|w| w.ln()).sum();
    ln_gamma(alpha) - k * ln_gamma(alpha / k) + alpha / k * sum_log_omega
        + (hyper.a_alpha - 1.0) * alpha.ln()
        - hyper.b_alpha * alpha
}

/// Log-scale random-walk Metropolis update of α.
pub fn mh_update_alpha(
    omega: &[f64],
    hyper: &ClassHyper,
    alpha: &mut f64,
    scale: &mut AdaptiveScale,
    adapt: bool,
    rng: &mut ChainRng,
) -> Result<bool> {
    log_scale_metropolis_step(
        |a| alpha_log_conditional(a, omega, hyper),
        alpha,
        scale,
        adapt,
        rng,
    )
}

#[derive(Debug, Clone)]
pub struct ClassModel {
    pub hyper: ClassHyper,
}

#[derive(Debug, Clone)]
pub struct ClassTuning {
    pub eta: Vec<AdaptiveScale>,
    pub alpha: AdaptiveScale,
}

impl ClassModel {
    pub fn new(hyper: ClassHyper) -> Result<Self> {
        hyper.validate()?;
        Ok(ClassModel { hyper })
    }
}

impl LatentModel for ClassModel {
    type State = ClassState;
    type Tuning = ClassTuning;

    fn name(&self) -> &'static str {
        "class"
    }

    fn dim(&self) -> usize {
        self.hyper.k
    }

    fn init(&self, net: &Network, rng: &mut ChainRng) -> Result<ClassState> {
        let k = self.hyper.k;
        let dyads = net.n_observed_dyads().max(1) as f64;
        let floor = 0.5 / dyads;
        let zeta = logit(density(net).unwrap_or(0.5).clamp(floor, 1.0 - floor));
        let tau2 = if self.hyper.a_tau > 1.0 {
            self.hyper.b_tau / (self.hyper.a_tau - 1.0)
        } else {
            self.hyper.b_tau
        };
        Ok(ClassState {
            xi: (0..net.n_actors()).map(|_| rng.random_range(0..k)).collect(),
            eta: vec![zeta; self.hyper.n_blocks()],
            omega: vec![1.0 / k as f64; k],
            zeta,
            tau2,
            alpha: 1.0,
            k,
        })
    }

    fn tuning(&self, _net: &Network, _state: &ClassState) -> ClassTuning {
        ClassTuning {
            eta: vec![AdaptiveScale::for_dim(0.5, 1); self.hyper.n_blocks()],
            alpha: AdaptiveScale::for_dim(0.5, 1),
        }
    }

    fn sweep(
        &self,
        net: &Network,
        state: &mut ClassState,
        tuning: &mut ClassTuning,
        adapt: bool,
        rng: &mut ChainRng,
    ) -> Result<()> {
        mh_update_eta(net, state, &mut tuning.eta, adapt, rng)?;
        gibbs_xi(net, state, rng);
        state.omega = gibbs_omega(&state.xi, state.alpha, state.k, rng);
        state.zeta = gibbs_zeta_class(&state.eta, &self.hyper, state.tau2, rng);
        state.tau2 = gibbs_tau2(&state.eta, state.zeta, &self.hyper, rng);
        mh_update_alpha(
            &state.omega,
            &self.hyper,
            &mut state.alpha,
            &mut tuning.alpha,
            adapt,
            rng,
        )?;
        Ok(())
    }

    #[inline]
    fn log_odds(&self, state: &ClassState, i: usize, j: usize) -> f64 {
        state.eta_at(state.xi[i], state.xi[j])
    }

    fn log_prior(&self, state: &ClassState) -> f64 {
        let h = &self.hyper;
        let k = state.k as f64;
        let labels: f64 = state.xi.iter().map(|&x| state.omega[x].ln()).sum();
        let sum_log_omega: f64 = state.omega.iter().map(|w| w.ln()).sum();
        let dir = ln_gamma(state.alpha) - k * ln_gamma(state.alpha / k)
            + (state.alpha / k - 1.0) * sum_log_omega;
        let gam = (h.a_alpha - 1.0) * state.alpha.ln() - h.b_alpha * state.alpha;
        let zeta = -(state.zeta - h.mu_zeta).powi(2) / (2.0 * h.sigma2_zeta);
        let tau = InvGamma::new(h.a_tau, h.b_tau).ln_pdf(state.tau2);
        let eta: f64 = state
            .eta
            .iter()
            .map(|e| -0.5 * state.tau2.ln() - (e - state.zeta).powi(2) / (2.0 * state.tau2))
            .sum();
        labels + dir + gam + zeta + tau + eta
    }

    fn scalar_names(&self) -> Vec<&'static str> {
        vec!["zeta", "tau2", "alpha"]
    }

    fn scalars(&self, state: &ClassState) -> Vec<f64> {
        vec![state.zeta, state.tau2, state.alpha]
    }

    fn sample_prior(&self, n_actors: usize, rng: &mut ChainRng) -> ClassState {
        let h = &self.hyper;
        let alpha: f64 = Gamma::new(h.a_alpha, 1.0 / h.b_alpha)
            .expect("valid gamma")
            .sample(rng);
        let omega = dirichlet(&vec![alpha / h.k as f64; h.k], rng);
        let log_omega: Vec<f64> = omega.iter().map(|w| w.ln()).collect();
        let xi = (0..n_actors).map(|_| categorical_log(&log_omega, rng)).collect();
        let zeta = normal(h.mu_zeta, h.sigma2_zeta, rng);
        let tau2 = InvGamma::new(h.a_tau, h.b_tau).sample(rng);
        let eta = (0..h.n_blocks()).map(|_| normal(zeta, tau2, rng)).collect();
        ClassState {
            xi,
            eta,
            omega,
            zeta,
            tau2,
            alpha,
            k: h.k,
        }
    }

    fn acceptance(&self, tuning: &ClassTuning) -> Vec<(String, f64)> {
        let used: Vec<f64> = tuning
            .eta
            .iter()
            .filter(|s| s.proposed > 0)
            .map(|s| s.acceptance_rate())
            .collect();
        let eta = if used.is_empty() {
            0.0
        } else {
            crate::math::mean(&used)
        };
        vec![
            ("eta".to_string(), eta),
            ("alpha".to_string(), tuning.alpha.acceptance_rate()),
        ]
    }

    fn columns(&self, n_actors: usize) -> Vec<String> {
        let k = self.hyper.k;
        let mut cols: Vec<String> = self.scalar_names().iter().map(|s| s.to_string()).collect();
        cols.extend((0..n_actors).map(|i| format!("xi_{i}")));
        for a in 0..k {
            for b in a..k {
                cols.push(format!("eta_{}_{}", a + 1, b + 1));
            }
        }
        cols.extend((0..k).map(|a| format!("omega_{}", a + 1)));
        cols
    }

    fn flatten(&self, state: &ClassState) -> Vec<f64> {
        let mut row = vec![state.zeta, state.tau2, state.alpha];
        row.extend(state.xi.iter().map(|&x| (x + 1) as f64));
        row.extend_from_slice(&state.eta);
        row.extend_from_slice(&state.omega);
        row
    }

    fn unflatten(&self, n_actors: usize, row: &[f64]) -> Result<ClassState> {
        let k = self.hyper.k;
        let nb = self.hyper.n_blocks();
        let expected = 3 + n_actors + nb + k;
        if row.len() != expected {
            return Err(Error::Dimension(format!(
                "class row has {} values, expected {expected}",
                row.len()
            )));
        }
        let xi = row[3..3 + n_actors]
            .iter()
            .map(|&v| {
                let label = v.round() as usize;
                if label == 0 || label > k || (v - label as f64).abs() > 1e-9 {
                    Err(Error::invalid(format!("class label {v} outside 1..={k}")))
                } else {
                    Ok(label - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassState {
            zeta: row[0],
            tau2: row[1],
            alpha: row[2],
            xi,
            eta: row[3 + n_actors..3 + n_actors + nb].to_vec(),
            omega: row[3 + n_actors + nb..].to_vec(),
            k,
        })
    }
}
