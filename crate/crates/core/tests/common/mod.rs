//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use latspace::mcmc::rng::ChainRng;
use latspace::partition::co_membership;
use rand::Rng;

pub fn waic_oracle(ll: &[Vec<f64>]) -> (f64, f64) {
    let b = ll.len() as f64;
    let mut lppd = 0.0;
    let mut penalty = 0.0;
    for d in 0..ll[0].len() {
        let mean_lik: f64 = ll.iter().map(|r| r[d].exp()).sum::<f64>() / b;
        let mean_ll: f64 = ll.iter().map(|r| r[d]).sum::<f64>() / b;
        lppd += mean_lik.ln();
        penalty += mean_lik.ln() - mean_ll;
    }
    let p = 2.0 * penalty;
    (-2.0 * lppd + 2.0 * p, p)
}

pub fn auc_oracle(scores: &[f64], labels: &[bool]) -> f64 {
    let mut total = 0.0;
    let mut pairs = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        for (j, &lj) in labels.iter().enumerate() {
            if li && !lj {
                pairs += 1.0;
                total += if scores[i] > scores[j] {
                    1.0
                } else if scores[i] == scores[j] {
                    0.5
                } else {
                    0.0
                };
            }
        }
    }
    total / pairs
}

/// Optimal orthogonal 2×2 map by closed form: best rotation angle and best
/// reflection angle from the cross moments, whichever leaves less residual.
pub fn procrustes_2d_oracle(ub: &[f64], u0: &[f64]) -> f64 {
    let n = ub.len() / 2;
    let residual = |q: [f64; 4]| -> f64 {
        (0..n)
            .map(|i| {
                let (x, y) = (ub[2 * i], ub[2 * i + 1]);
                let ax = x * q[0] + y * q[2];
                let ay = x * q[1] + y * q[3];
                (u0[2 * i] - ax).powi(2) + (u0[2 * i + 1] - ay).powi(2)
            })
            .sum()
    };
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let (x, y, p, q) = (ub[2 * i], ub[2 * i + 1], u0[2 * i], u0[2 * i + 1]);
        a += x * p + y * q;
        b += x * q - y * p;
        c += x * p - y * q;
        d += x * q + y * p;
    }
    // rotation [[cos, sin], [−sin, cos]] applied as row-vector times Q
    let t = b.atan2(a);
    let rot = [t.cos(), t.sin(), -t.sin(), t.cos()];
    // reflection [[cos, sin], [sin, −cos]]
    let r = d.atan2(c);
    let refl = [r.cos(), r.sin(), r.sin(), -r.cos()];
    residual(rot).min(residual(refl))
}

/// Every set partition of `n` items as a restricted growth string.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for l in 0..=max + 1 {
            prefix.push(l);
            grow(prefix, max.max(l), n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    grow(&mut prefix, 0, n, &mut out);
    out
}

/// Co-membership of averaged random partitions, so that the matrix is a
/// realistic mixture rather than arbitrary noise.
pub fn random_co_membership(rng: &mut ChainRng, n: usize) -> Vec<Vec<f64>> {
    let base: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
    let samples: Vec<Vec<usize>> = (0..20)
        .map(|_| {
            base.iter()
                .map(|&b| if rng.random_bool(0.25) { rng.random_range(0..4) } else { b })
                .collect()
        })
        .collect();
    co_membership(&samples).unwrap()
}
