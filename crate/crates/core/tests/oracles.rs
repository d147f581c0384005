//! Brute-force oracles for the summary computations: WAIC, DIC, AUC,
//! Procrustes, co-membership and the partition point estimate.

use latspace::eval::{dic, roc_auc, waic};
use latspace::mcmc::rng::ChainRng;
use latspace::models::procrustes::procrustes_align;
use latspace::partition::{co_membership, partition_loss, partition_point_estimate};
use rand::{Rng, SeedableRng};

mod common;
use common::*;

fn random_ll(rng: &mut ChainRng, b: usize, n: usize) -> Vec<Vec<f64>> {
    (0..b)
        .map(|_| (0..n).map(|_| rng.random::<f64>().max(1e-3).ln()).collect())
        .collect()
}

#[test]
fn waic_matches_direct_averages() {
    let mut rng = ChainRng::seed_from_u64(1);
    for (b, n) in [(1, 5), (2, 1), (7, 13), (50, 40)] {
        let ll = random_ll(&mut rng, b, n);
        let w = waic(&ll).unwrap();
        let (ow, op) = waic_oracle(&ll);
        assert!((w.waic - ow).abs() < 1e-10, "{} vs {ow}", w.waic);
        assert!((w.p_waic - op).abs() < 1e-10);
    }
}

#[test]
fn dic_matches_direct_arithmetic() {
    let ll = vec![vec![0.5f64.ln(), 0.9f64.ln()], vec![0.25f64.ln(), 0.8f64.ln()]];
    let plug = [0.4f64.ln(), 0.85f64.ln()];
    let d = dic(&ll, &plug).unwrap();
    let mean_dev = (0.5f64.ln() + 0.25f64.ln() + 0.9f64.ln() + 0.8f64.ln()) / 2.0;
    let plug_sum = 0.4f64.ln() + 0.85f64.ln();
    let p = 2.0 * plug_sum - 2.0 * mean_dev;
    assert!((d.p_dic - p).abs() < 1e-12);
    assert!((d.dic - (-2.0 * plug_sum + 2.0 * p)).abs() < 1e-12);
}

#[test]
fn auc_matches_pairwise_count() {
    let mut rng = ChainRng::seed_from_u64(2);
    for round in 0..50 {
        let n = 20;
        // coarse scores in some rounds to force ties
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                let s: f64 = rng.random();
                if round % 2 == 0 {
                    (s * 4.0).floor()
                } else {
                    s
                }
            })
            .collect();
        let mut labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        labels[0] = true;
        labels[1] = false;
        let a = roc_auc(&scores, &labels).unwrap();
        assert!((a - auc_oracle(&scores, &labels)).abs() < 1e-12);
    }
}

#[test]
fn procrustes_matches_closed_form_in_two_dimensions() {
    let mut rng = ChainRng::seed_from_u64(3);
    for _ in 0..100 {
        let n = 8;
        let u0: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let ub: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let fit = procrustes_align(&ub, &u0, n, 2).unwrap();
        let oracle = procrustes_2d_oracle(&ub, &u0);
        assert!((fit.residual - oracle).abs() < 1e-10, "{} vs {oracle}", fit.residual);
    }
}

#[test]
fn co_membership_matches_iverson_average() {
    let mut rng = ChainRng::seed_from_u64(4);
    let samples: Vec<Vec<usize>> = (0..10)
        .map(|_| (0..9).map(|_| rng.random_range(0..3)).collect())
        .collect();
    let p = co_membership(&samples).unwrap();
    for i in 0..9 {
        for j in 0..9 {
            let hits = samples.iter().filter(|s| s[i] == s[j]).count();
            assert!((p[i][j] - hits as f64 / 10.0).abs() < 1e-12);
            assert_eq!(p[i][j], p[j][i]);
        }
    }
}

#[test]
fn bell_numbers() {
    let bell: Vec<usize> = (1..=8).map(|n| all_partitions(n).len()).collect();
    assert_eq!(bell, vec![1, 2, 5, 15, 52, 203, 877, 4140]);
}

#[test]
fn point_estimate_matches_exhaustive_search() {
    let mut rng = ChainRng::seed_from_u64(5);
    for n in 2..=8 {
        let candidates = all_partitions(n);
        for _ in 0..15 {
            let p = random_co_membership(&mut rng, n);
            for rel_cost in [0.5, 0.3, 0.7] {
                let exhaustive = candidates
                    .iter()
                    .map(|c| partition_loss(&p, c, rel_cost))
                    .fold(f64::INFINITY, f64::min);
                let est = partition_point_estimate(&p, rel_cost).unwrap();
                let loss = partition_loss(&p, &est, rel_cost);
                assert!(
                    (loss - exhaustive).abs() < 1e-10,
                    "n = {n}, c = {rel_cost}: {loss} vs {exhaustive}"
                );
            }
        }
    }
}
