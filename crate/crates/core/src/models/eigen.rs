//! Eigenmodel: `logit P(y_ij = 1) = ζ + Σ_k λ_k u_ik u_jk`.
//!
//! Priors: `u_i | σ² ~ N(0, σ² I_K)`, `λ_k | κ² ~ N(0, κ²)`,
//! `ζ | ω² ~ N(0, ω²)` and inverse-gamma hyperpriors on σ², κ², ω².
//! Positions are identified only up to per-column sign flips, column
//! permutations (jointly with λ) and per-column rescaling traded against λ,
//! so they are exported unaligned.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{bernoulli_logit_lpmf, logit, mean, quantile, tie_prob};
use crate::mcmc::adaptive::{rw_metropolis_step, AdaptiveScale};
use crate::mcmc::chain::LatentModel;
use crate::mcmc::rng::{normal, std_normal, ChainRng, InvGamma};
use crate::network::{density, Network};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenHyper {
    pub a_sigma: f64,
    pub b_sigma: f64,
    pub a_kappa: f64,
    pub b_kappa: f64,
    pub a_omega: f64,
    pub b_omega: f64,
    pub k: usize,
}

impl EigenHyper {
    /// Every shape 2, every rate 3.
    pub fn standard(k: usize) -> Self {
        EigenHyper {
            a_sigma: 2.0,
            b_sigma: 3.0,
            a_kappa: 2.0,
            b_kappa: 3.0,
            a_omega: 2.0,
            b_omega: 3.0,
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
            ("a_kappa", self.a_kappa),
            ("b_kappa", self.b_kappa),
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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenState {
    pub zeta: f64,
    /// Row-major `I × K` latent positions.
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    pub sigma2: f64,
    pub kappa2: f64,
    pub omega2: f64,
}

impl EigenState {
    pub fn k(&self) -> usize {
        self.lambda.len()
    }

    pub fn n_actors(&self) -> usize {
        self.u.len() / self.k()
    }

    #[inline]
    pub fn position(&self, i: usize) -> &[f64] {
        let k = self.k();
        &self.u[i * k..(i + 1) * k]
    }

    #[inline]
    fn quad(&self, i: usize, j: usize) -> f64 {
        weighted_inner(self.position(i), self.position(j), &self.lambda)
    }
}

#[inline]
fn weighted_inner(a: &[f64], b: &[f64], lambda: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(lambda)
        .map(|((x, y), l)| l * (x * y))
        .sum()
}

/// `expit(ζ + Σ_k λ_k u_ik u_jk)`.
pub fn prob_eigen(zeta: f64, u_i: &[f64], u_j: &[f64], lambda: &[f64]) -> Result<f64> {
    if u_i.len() != lambda.len() || u_j.len() != lambda.len() {
        return Err(Error::Dimension(format!(
            "positions of length {} and {} with {} eigenvalues",
            u_i.len(),
            u_j.len(),
            lambda.len()
        )));
    }
    Ok(tie_prob(zeta + weighted_inner(u_i, u_j, lambda)))
}

/// `IGam(a_σ + IK/2, b_σ + ½ Σ ‖u_i‖²)`.
pub fn sigma2_conditional(u: &[f64], hyper: &EigenHyper) -> InvGamma {
    let ss: f64 = u.iter().map(|x| x * x).sum();
    InvGamma::new(hyper.a_sigma + u.len() as f64 / 2.0, hyper.b_sigma + 0.5 * ss)
}

/// `IGam(a_κ + K/2, b_κ + ½ Σ λ_k²)`.
pub fn gibbs_kappa2(lambda: &[f64], hyper: &EigenHyper) -> InvGamma {
    let ss: f64 = lambda.iter().map(|x| x * x).sum();
    InvGamma::new(hyper.a_kappa + lambda.len() as f64 / 2.0, hyper.b_kappa + 0.5 * ss)
}

/// `IGam(a_ω + ½, b_ω + ½ ζ²)`.
pub fn omega2_conditional(zeta: f64, hyper: &EigenHyper) -> InvGamma {
    InvGamma::new(hyper.a_omega + 0.5, hyper.b_omega + 0.5 * zeta * zeta)
}

#[derive(Debug, Clone)]
pub struct EigenModel {
    pub hyper: EigenHyper,
}

#[derive(Debug, Clone)]
pub struct EigenTuning {
    pub actors: Vec<AdaptiveScale>,
    pub lambda: Vec<AdaptiveScale>,
    pub zeta: AdaptiveScale,
}

impl EigenModel {
    pub fn new(hyper: EigenHyper) -> Result<Self> {
        hyper.validate()?;
        Ok(EigenModel { hyper })
    }

    fn actor_loglik(&self, net: &Network, state: &EigenState, i: usize, u_i: &[f64]) -> f64 {
        let mut ll = 0.0;
        for j in 0..net.n_actors() {
            if j != i && net.is_observed(i, j) {
                let x = state.zeta + weighted_inner(u_i, state.position(j), &state.lambda);
                ll += bernoulli_logit_lpmf(net.y(i, j), x);
            }
        }
        ll
    }
}

impl LatentModel for EigenModel {
    type State = EigenState;
    type Tuning = EigenTuning;

    fn name(&self) -> &'static str {
        "eigen"
    }

    fn dim(&self) -> usize {
        self.hyper.k
    }

    /// Leading eigenvectors of the centred adjacency matrix, scaled to unit
    /// column variance, with eigenvalues mapped to the log-odds scale.
    fn init(&self, net: &Network, rng: &mut ChainRng) -> Result<EigenState> {
        let n = net.n_actors();
        let k = self.hyper.k;
        let dyads = net.n_observed_dyads().max(1) as f64;
        let floor = 0.5 / dyads;
        let rho = density(net).unwrap_or(0.5).clamp(floor, 1.0 - floor);

        let mut u = vec![0.0; n * k];
        let mut lambda = vec![0.0; k];
        if n >= 2 {
            let centred = DMatrix::from_fn(n, n, |i, j| {
                if i != j && net.is_observed(i, j) {
                    f64::from(net.y(i, j)) - rho
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(centred);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].abs().total_cmp(&eig.eigenvalues[a].abs()));
            let scale = (n as f64).sqrt();
            for (d, &col) in order.iter().take(k).enumerate() {
                for i in 0..n {
                    u[i * k + d] = eig.eigenvectors[(i, col)] * scale;
                }
                lambda[d] = 4.0 * eig.eigenvalues[col] / n as f64;
            }
        }
        // jitter breaks exact ties and fills dimensions beyond the rank
        for x in u.iter_mut() {
            *x += 0.01 * std_normal(rng);
        }
        Ok(EigenState {
            zeta: logit(rho),
            u,
            lambda,
            sigma2: 1.0,
            kappa2: prior_mean(self.hyper.a_kappa, self.hyper.b_kappa),
            omega2: prior_mean(self.hyper.a_omega, self.hyper.b_omega),
        })
    }

    fn tuning(&self, net: &Network, _state: &EigenState) -> EigenTuning {
        EigenTuning {
            actors: vec![AdaptiveScale::for_dim(0.5, self.hyper.k); net.n_actors()],
            lambda: vec![AdaptiveScale::for_dim(0.5, 1); self.hyper.k],
            zeta: AdaptiveScale::for_dim(0.5, 1),
        }
    }

    fn sweep(
        &self,
        net: &Network,
        state: &mut EigenState,
        tuning: &mut EigenTuning,
        adapt: bool,
        rng: &mut ChainRng,
    ) -> Result<()> {
        let n = net.n_actors();
        let k = self.hyper.k;

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

        // each λ_k against the log-odds with its own term removed
        let dyads: Vec<(usize, usize)> = net.observed_dyads().collect();
        let mut x: Vec<f64> = dyads
            .iter()
            .map(|&(i, j)| state.zeta + state.quad(i, j))
            .collect();
        let ys: Vec<u8> = dyads.iter().map(|&(i, j)| net.y(i, j)).collect();
        let inv_two_k2 = 0.5 / state.kappa2;
        for d in 0..k {
            let prod: Vec<f64> = dyads
                .iter()
                .map(|&(i, j)| state.u[i * k + d] * state.u[j * k + d])
                .collect();
            let old = state.lambda[d];
            let rest: Vec<f64> = x.iter().zip(&prod).map(|(xv, p)| xv - old * p).collect();
            let mut l = [old];
            rw_metropolis_step(
                |v: &[f64]| {
                    rest.iter()
                        .zip(&prod)
                        .zip(&ys)
                        .map(|((r, p), &y)| bernoulli_logit_lpmf(y, r + v[0] * p))
                        .sum::<f64>()
                        - inv_two_k2 * v[0] * v[0]
                },
                &mut l,
                &mut tuning.lambda[d],
                adapt,
                rng,
            )?;
            state.lambda[d] = l[0];
            for ((xv, r), p) in x.iter_mut().zip(&rest).zip(&prod) {
                *xv = r + l[0] * p;
            }
        }

        let inv_two_w2 = 0.5 / state.omega2;
        let old_zeta = state.zeta;
        let mut z = [old_zeta];
        rw_metropolis_step(
            |v: &[f64]| {
                x.iter()
                    .zip(&ys)
                    .map(|(xv, &y)| bernoulli_logit_lpmf(y, xv - old_zeta + v[0]))
                    .sum::<f64>()
                    - inv_two_w2 * v[0] * v[0]
            },
            &mut z,
            &mut tuning.zeta,
            adapt,
            rng,
        )?;
        state.zeta = z[0];

        state.sigma2 = sigma2_conditional(&state.u, &self.hyper).sample(rng);
        state.kappa2 = gibbs_kappa2(&state.lambda, &self.hyper).sample(rng);
        state.omega2 = omega2_conditional(state.zeta, &self.hyper).sample(rng);
        Ok(())
    }

    #[inline]
    fn log_odds(&self, state: &EigenState, i: usize, j: usize) -> f64 {
        state.zeta + state.quad(i, j)
    }

    fn log_prior(&self, state: &EigenState) -> f64 {
        let h = &self.hyper;
        let n_u = state.u.len() as f64;
        let k = state.k() as f64;
        let ss_u: f64 = state.u.iter().map(|x| x * x).sum();
        let ss_l: f64 = state.lambda.iter().map(|x| x * x).sum();
        -0.5 * n_u * state.sigma2.ln() - 0.5 * ss_u / state.sigma2
            - 0.5 * k * state.kappa2.ln()
            - 0.5 * ss_l / state.kappa2
            - 0.5 * state.omega2.ln()
            - 0.5 * state.zeta * state.zeta / state.omega2
            + InvGamma::new(h.a_sigma, h.b_sigma).ln_pdf(state.sigma2)
            + InvGamma::new(h.a_kappa, h.b_kappa).ln_pdf(state.kappa2)
            + InvGamma::new(h.a_omega, h.b_omega).ln_pdf(state.omega2)
    }

    fn scalar_names(&self) -> Vec<&'static str> {
        vec!["zeta", "sigma2", "kappa2", "omega2"]
    }

    fn scalars(&self, state: &EigenState) -> Vec<f64> {
        vec![state.zeta, state.sigma2, state.kappa2, state.omega2]
    }

    fn sample_prior(&self, n_actors: usize, rng: &mut ChainRng) -> EigenState {
        let h = &self.hyper;
        let sigma2 = InvGamma::new(h.a_sigma, h.b_sigma).sample(rng);
        let kappa2 = InvGamma::new(h.a_kappa, h.b_kappa).sample(rng);
        let omega2 = InvGamma::new(h.a_omega, h.b_omega).sample(rng);
        let (sd_u, sd_l) = (sigma2.sqrt(), kappa2.sqrt());
        let u = (0..n_actors * h.k).map(|_| sd_u * std_normal(rng)).collect();
        let lambda = (0..h.k).map(|_| sd_l * std_normal(rng)).collect();
        EigenState {
            zeta: normal(0.0, omega2, rng),
            u,
            lambda,
            sigma2,
            kappa2,
            omega2,
        }
    }

    fn acceptance(&self, tuning: &EigenTuning) -> Vec<(String, f64)> {
        let avg = |v: &[AdaptiveScale]| {
            v.iter().map(|s| s.acceptance_rate()).sum::<f64>() / v.len().max(1) as f64
        };
        vec![
            ("u".to_string(), avg(&tuning.actors)),
            ("lambda".to_string(), avg(&tuning.lambda)),
            ("zeta".to_string(), tuning.zeta.acceptance_rate()),
        ]
    }

    fn columns(&self, n_actors: usize) -> Vec<String> {
        let k = self.hyper.k;
        let mut cols: Vec<String> = self.scalar_names().iter().map(|s| s.to_string()).collect();
        cols.extend((0..k).map(|d| format!("lambda_{d}")));
        for i in 0..n_actors {
            for d in 0..k {
                cols.push(format!("u_{i}_{d}"));
            }
        }
        cols
    }

    fn flatten(&self, state: &EigenState) -> Vec<f64> {
        let mut row = self.scalars(state);
        row.extend_from_slice(&state.lambda);
        row.extend_from_slice(&state.u);
        row
    }

    fn unflatten(&self, n_actors: usize, row: &[f64]) -> Result<EigenState> {
        let k = self.hyper.k;
        let expected = 4 + k + n_actors * k;
        if row.len() != expected {
            return Err(Error::Dimension(format!(
                "eigen row has {} values, expected {expected}",
                row.len()
            )));
        }
        Ok(EigenState {
            zeta: row[0],
            sigma2: row[1],
            kappa2: row[2],
            omega2: row[3],
            lambda: row[4..4 + k].to_vec(),
            u: row[4 + k..].to_vec(),
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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSummary {
    pub dim: usize,
    pub mean: f64,
    pub q025: f64,
    pub q975: f64,
}

/// Posterior mean and 95% interval of each λ_k.
pub fn summarize_lambda(states: &[&EigenState]) -> Result<Vec<LambdaSummary>> {
    let first = states.first().ok_or(Error::Empty("no states to summarize"))?;
    Ok((0..first.k())
        .map(|d| {
            let mut v: Vec<f64> = states.iter().map(|s| s.lambda[d]).collect();
            v.sort_by(f64::total_cmp);
            LambdaSummary {
                dim: d,
                mean: mean(&v),
                q025: quantile(&v, 0.025),
                q975: quantile(&v, 0.975),
            }
        })
        .collect())
}
