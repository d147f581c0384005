//! Random-walk Metropolis with a Robbins–Monro tuned step size.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcmc::rng::std_normal;

const DECAY: f64 = 0.6;

/// Optimal-scaling acceptance targets: 0.44 in one dimension, 0.234 from
/// three dimensions up, 0.35 in between.
pub fn target_accept_for_dim(dim: usize) -> f64 {
    match dim {
        0 | 1 => 0.44,
        2 => 0.35,
        _ => 0.234,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveScale {
    pub log_step: f64,
    pub target_accept: f64,
    pub adapt_count: u64,
    pub proposed: u64,
    pub accepted: u64,
}

impl AdaptiveScale {
    pub fn new(step: f64, target_accept: f64) -> Self {
        assert!(step > 0.0 && (0.0..1.0).contains(&target_accept));
        AdaptiveScale {
            log_step: step.ln(),
            target_accept,
            adapt_count: 0,
            proposed: 0,
            accepted: 0,
        }
    }

    pub fn for_dim(step: f64, dim: usize) -> Self {
        Self::new(step, target_accept_for_dim(dim))
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.log_step.exp()
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn reset_counts(&mut self) {
        self.proposed = 0;
        self.accepted = 0;
    }

    fn record(&mut self, accepted: bool, adapt: bool) {
        self.proposed += 1;
        self.accepted += u64::from(accepted);
        if adapt {
            self.adapt_count += 1;
            let indicator = if accepted { 1.0 } else { 0.0 };
            self.log_step +=
                (indicator - self.target_accept) / (self.adapt_count as f64).powf(DECAY);
        }
    }
}

/// Metropolis acceptance for a symmetric proposal given the log-ratio.
/// `-inf` rejects, NaN is an error.
pub fn metropolis_accept<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> Result<bool> {
    if log_ratio.is_nan() {
        return Err(Error::NanTarget);
    }
    if log_ratio >= 0.0 {
        return Ok(true);
    }
    let u: f64 = rng.random();
    Ok(u.ln() < log_ratio)
}

/// One random-walk Metropolis step `x' = x + step·z`, `z ~ N(0, I)`.
///
/// Returns whether the proposal was accepted; `current` is overwritten on
/// acceptance. When `adapt` is set the step size follows the Robbins–Monro
/// recursion `log_step += (accepted − target) / n^0.6`.
pub fn rw_metropolis_step<F, R>(
    mut log_target: F,
    current: &mut [f64],
    scale: &mut AdaptiveScale,
    adapt: bool,
    rng: &mut R,
) -> Result<bool>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let lp_current = log_target(current);
    if lp_current.is_nan() {
        return Err(Error::NanTarget);
    }
    rw_metropolis_step_from(&mut log_target, current, lp_current, scale, adapt, rng)
        .map(|(accepted, _)| accepted)
}

/// As [`rw_metropolis_step`], with the log target at `current` supplied by
/// the caller. Also returns the log target at the state kept.
pub fn rw_metropolis_step_from<F, R>(
    log_target: &mut F,
    current: &mut [f64],
    lp_current: f64,
    scale: &mut AdaptiveScale,
    adapt: bool,
    rng: &mut R,
) -> Result<(bool, f64)>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let step = scale.step();
    let proposal: Vec<f64> = current.iter().map(|&x| x + step * std_normal(rng)).collect();
    let lp_prop = log_target(&proposal);
    let accepted = metropolis_accept(lp_prop - lp_current, rng)?;
    scale.record(accepted, adapt);
    if accepted {
        current.copy_from_slice(&proposal);
        Ok((true, lp_prop))
    } else {
        Ok((false, lp_current))
    }
}

/// Scalar random walk on `log x` for a positive parameter; `log_target` is
/// the density of `x` itself and the Jacobian `log x` is added here.
pub fn log_scale_metropolis_step<F, R>(
    mut log_target: F,
    current: &mut f64,
    scale: &mut AdaptiveScale,
    adapt: bool,
    rng: &mut R,
) -> Result<bool>
where
    F: FnMut(f64) -> f64,
    R: Rng + ?Sized,
{
    let mut z = [current.ln()];
    let accepted = rw_metropolis_step(
        |v: &[f64]| {
            let x = v[0].exp();
            if x <= 0.0 || !x.is_finite() {
                return f64::NEG_INFINITY;
            }
            log_target(x) + v[0]
        },
        &mut z,
        scale,
        adapt,
        rng,
    )?;
    *current = z[0].exp();
    Ok(accepted)
}
