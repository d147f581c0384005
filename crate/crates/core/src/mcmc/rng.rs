//! Seeded random streams and the handful of distributions the samplers draw
//! from.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::math::log_sum_exp;

pub type ChainRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `index` derived from a master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

pub fn chain_rng(master: u64, index: u64) -> ChainRng {
    ChainRng::seed_from_u64(derive_seed(master, index))
}

#[inline]
pub fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// `log` of a Gamma(shape, 1) draw; stays finite for tiny shapes where the
/// draw itself would underflow.
pub fn log_gamma_draw<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape >= 1.0 {
        Gamma::new(shape, 1.0).expect("positive shape").sample(rng).ln()
    } else {
        // G(a) = G(a + 1) · U^{1/a}
        let g = Gamma::new(shape + 1.0, 1.0)
            .expect("positive shape")
            .sample(rng);
        let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        g.ln() + u.ln() / shape
    }
}

/// Inverse-gamma distribution with density ∝ x^{-(shape+1)} e^{-rate/x}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvGamma {
    pub shape: f64,
    pub rate: f64,
}

impl InvGamma {
    pub fn new(shape: f64, rate: f64) -> Self {
        assert!(shape > 0.0 && rate > 0.0, "inverse-gamma needs positive parameters");
        InvGamma { shape, rate }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g: f64 = Gamma::new(self.shape, 1.0 / self.rate)
            .expect("valid gamma")
            .sample(rng);
        1.0 / g
    }

    /// Finite only for `shape > 1`.
    pub fn mean(&self) -> f64 {
        self.rate / (self.shape - 1.0)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        use statrs::function::gamma::ln_gamma;
        self.shape * self.rate.ln() - ln_gamma(self.shape) - (self.shape + 1.0) * x.ln()
            - self.rate / x
    }
}

/// Normal draw with the given mean and variance.
pub fn normal<R: Rng + ?Sized>(mean: f64, var: f64, rng: &mut R) -> f64 {
    mean + var.sqrt() * std_normal(rng)
}

/// Dirichlet draw computed through log-gammas so that small concentrations
/// do not produce exact zeros. Components are floored at the smallest
/// positive normal number.
pub fn dirichlet<R: Rng + ?Sized>(concentration: &[f64], rng: &mut R) -> Vec<f64> {
    let logs: Vec<f64> = concentration
        .iter()
        .map(|&a| log_gamma_draw(a, rng))
        .collect();
    let norm = log_sum_exp(&logs);
    let mut w: Vec<f64> = logs
        .iter()
        .map(|l| (l - norm).exp().max(f64::MIN_POSITIVE))
        .collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

/// Normalizes log-weights into probabilities via log-sum-exp.
pub fn normalize_log_weights(log_w: &[f64]) -> Vec<f64> {
    let norm = log_sum_exp(log_w);
    log_w.iter().map(|l| (l - norm).exp()).collect()
}

/// Draws an index with probability proportional to `exp(log_w)`.
pub fn categorical_log<R: Rng + ?Sized>(log_w: &[f64], rng: &mut R) -> usize {
    let p = normalize_log_weights(log_w);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (k, pk) in p.iter().enumerate() {
        acc += pk;
        if u < acc {
            return k;
        }
    }
    p.iter().rposition(|&x| x > 0.0).unwrap_or(p.len() - 1)
}
