//! Acceptance suite: one PASS/FAIL line per criterion, run sequentially so
//! that the wall-clock budgets are meaningful on a single core.
//!
//! Optional data: `LATSPACE_VILLAGE` (or `crates/core/data/village.txt`) for criterion 5,
//! and `LATSPACE_JAZZ` together with `LATSPACE_SLOW=1` for the slow
//! cross-validation path of criterion 7.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use latspace::eval::{
    assign_folds, cross_validate, dic, in_sample_auc, posterior_predictive, roc_auc, score_fit,
    waic, PpcStatistic,
};
use latspace::mcmc::geweke::{geweke_test, GewekeConfig};
use latspace::mcmc::rng::{std_normal, ChainRng};
use latspace::models::class::{block_index, omega_conditional, tau2_conditional, zeta_conditional};
use latspace::models::distance::{gibbs_omega2, gibbs_sigma2_distance};
use latspace::models::eigen::{gibbs_kappa2, omega2_conditional, sigma2_conditional};
use latspace::models::procrustes::procrustes_align;
use latspace::models::*;
use latspace::network::{
    degree_assortativity, density, load_edge_list, sample_random_graph, transitivity,
    EdgeListFormat,
};
use latspace::partition::{
    adjusted_rand_index, cluster_sizes, co_membership, partition_loss, partition_point_estimate,
};
use latspace::{datasets, run_chains, with_model, LatentModel, McmcConfig, Network};
use rand::{Rng, SeedableRng};

#[path = "../../core/tests/common/mod.rs"]
mod common;
use common::*;

/// Outcome of one criterion: pass flag and a one-line summary.
type Outcome = (bool, String);

fn line(text: &str) {
    // written straight to the stream so it shows without --nocapture
    let mut err = std::io::stderr();
    let _ = writeln!(err, "{text}");
}

fn within(d: Duration, minutes: f64) -> bool {
    d.as_secs_f64() < minutes * 60.0
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let net = datasets::zach();
    let d = density(&net).unwrap();
    let tr = transitivity(&net).unwrap();
    let a = degree_assortativity(&net).unwrap();
    let elapsed = t.elapsed();
    let ok = (d - 0.139).abs() <= 0.0005
        && (tr - 0.256).abs() <= 0.0005
        && (a + 0.476).abs() <= 0.0005
        && elapsed < Duration::from_secs(1);
    (
        ok,
        format!("zach density {d:.5}, transitivity {tr:.5}, assortativity {a:.5} in {elapsed:?}"),
    )
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

fn criterion_2() -> Outcome {
    let mut rng = ChainRng::seed_from_u64(22);
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut check = |name: &str, got: f64, want: f64| {
        checks += 1;
        if !close(got, want) {
            failures.push(format!("{name}: {got} vs {want}"));
        }
    };
    for _ in 0..50 {
        let n: usize = rng.random_range(2..30);
        let k: usize = rng.random_range(1..6);
        let (a, b) = (rng.random_range(0.5..5.0), rng.random_range(0.5..5.0));
        let u: Vec<f64> = (0..n * k).map(|_| 2.0 * std_normal(&mut rng)).collect();
        let norms: f64 = (0..n)
            .map(|i| (0..k).map(|d| u[i * k + d].powi(2)).sum::<f64>())
            .sum();
        let zeta = 3.0 * std_normal(&mut rng);

        let ig = gibbs_sigma2_distance(&u, k, a, b);
        check("distance sigma2 shape", ig.shape, a + (n * k) as f64 / 2.0);
        check("distance sigma2 rate", ig.rate, b + norms / 2.0);
        let ig = gibbs_omega2(zeta, a, b);
        check("distance omega2 shape", ig.shape, a + 0.5);
        check("distance omega2 rate", ig.rate, b + zeta * zeta / 2.0);

        let ch = ClassHyper {
            mu_zeta: std_normal(&mut rng),
            sigma2_zeta: rng.random_range(0.5..5.0),
            a_tau: a,
            b_tau: b,
            ..ClassHyper::standard(k)
        };
        let xi: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let alpha = rng.random_range(0.1..5.0);
        let conc = omega_conditional(&xi, alpha, k);
        for (c, v) in conc.iter().enumerate() {
            let count = xi.iter().filter(|&&x| x == c).count() as f64;
            check("class omega", *v, alpha / k as f64 + count);
        }
        let eta: Vec<f64> = (0..k * (k + 1) / 2).map(|_| std_normal(&mut rng)).collect();
        let tau2 = rng.random_range(0.2..4.0);
        let (m, v2) = zeta_conditional(&eta, &ch, tau2);
        let blocks = (k * (k + 1) / 2) as f64;
        let want_v2 = 1.0 / (1.0 / ch.sigma2_zeta + blocks / tau2);
        let mut eta_sum = 0.0;
        for p in 0..k {
            for q in p..k {
                eta_sum += eta[block_index(p, q, k)];
            }
        }
        check("class zeta variance", v2, want_v2);
        check("class zeta mean", m, want_v2 * (ch.mu_zeta / ch.sigma2_zeta + eta_sum / tau2));
        let ig = tau2_conditional(&eta, zeta, &ch);
        check("class tau2 shape", ig.shape, a + (k * (k + 1)) as f64 / 4.0);
        let ss: f64 = eta.iter().map(|e| (e - zeta) * (e - zeta)).sum();
        check("class tau2 rate", ig.rate, b + ss / 2.0);

        let eh = EigenHyper {
            a_sigma: a,
            b_sigma: b,
            a_kappa: b,
            b_kappa: a,
            a_omega: a + 1.0,
            b_omega: b + 1.0,
            k,
        };
        let lambda: Vec<f64> = (0..k).map(|_| std_normal(&mut rng)).collect();
        let ig = sigma2_conditional(&u, &eh);
        check("eigen sigma2 shape", ig.shape, a + (n * k) as f64 / 2.0);
        check("eigen sigma2 rate", ig.rate, b + norms / 2.0);
        let ig = gibbs_kappa2(&lambda, &eh);
        check("eigen kappa2 shape", ig.shape, b + k as f64 / 2.0);
        check(
            "eigen kappa2 rate",
            ig.rate,
            a + lambda.iter().map(|l| l * l).sum::<f64>() / 2.0,
        );
        let ig = omega2_conditional(zeta, &eh);
        check("eigen omega2 shape", ig.shape, a + 1.5);
        check("eigen omega2 rate", ig.rate, b + 1.0 + zeta * zeta / 2.0);
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("{checks} closed-form parameters agree to 1e-12")
    } else {
        failures.join("; ")
    };
    (ok, detail)
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut worst = (0.0f64, String::new());
    let mut n_stats = 0;
    for n in [5, 6] {
        for k in [1, 2] {
            let cfg = GewekeConfig {
                n_actors: n,
                n_draws: 200_000,
                n_adapt: 10_000,
                // long batches: the intercept mixes slowly in the successive chain
                n_batches: 25,
                seed: 100 + (10 * n + k) as u64,
                ..GewekeConfig::default()
            };
            let dist = DistanceModel::new(DistanceHyper {
                a_sigma: 6.0,
                b_sigma: 5.0,
                a_omega: 6.0,
                b_omega: 5.0,
                k,
            })
            .unwrap();
            let class = ClassModel::new(ClassHyper {
                a_tau: 6.0,
                b_tau: 5.0,
                a_alpha: 3.0,
                b_alpha: 2.0,
                ..ClassHyper::standard(k)
            })
            .unwrap();
            let eigen = EigenModel::new(EigenHyper {
                a_sigma: 6.0,
                b_sigma: 5.0,
                a_kappa: 6.0,
                b_kappa: 5.0,
                a_omega: 6.0,
                b_omega: 5.0,
                k,
            })
            .unwrap();
            let runs = [
                ("distance", geweke_test(&dist, &cfg).unwrap()),
                ("class", geweke_test(&class, &cfg).unwrap()),
                ("eigen", geweke_test(&eigen, &cfg).unwrap()),
            ];
            for (model, stats) in runs {
                for s in stats {
                    n_stats += 1;
                    if s.z.abs() > worst.0 {
                        worst = (
                            s.z.abs(),
                            format!("{model} I={n} K={k} {} moment {}", s.name, s.moment),
                        );
                    }
                }
            }
        }
    }
    let elapsed = t.elapsed();
    let ok = worst.0 < 3.0 && within(elapsed, 10.0);
    (
        ok,
        format!(
            "{n_stats} Geweke statistics, max |z| = {:.2} ({}), {elapsed:.1?}",
            worst.0, worst.1
        ),
    )
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let net = datasets::florentine();
    let model = DistanceModel::new(DistanceHyper::elicited(net.n_actors(), 2)).unwrap();
    let post = run_chains(&model, &net, &McmcConfig::default()).unwrap();
    let auc = in_sample_auc(&post, &net).unwrap();
    let states: Vec<_> = post.states().collect();
    let ppc =
        posterior_predictive(&model, &states, &net, &[PpcStatistic::Density], 2000, 4).unwrap();
    let d = &ppc.records[0];
    let inside = d.inside_99().unwrap();
    let elapsed = t.elapsed();
    let ok = auc >= 0.85 && inside && within(elapsed, 5.0);
    (
        ok,
        format!(
            "florentine distance K=2: in-sample AUC {auc:.3}, density {:.3} in 99% PPC [{:.3}, {:.3}]: {inside}, {elapsed:.1?}",
            d.observed.unwrap(),
            d.q005,
            d.q995
        ),
    )
}

fn village_path() -> Option<PathBuf> {
    if let Ok(p) = std::env::var("LATSPACE_VILLAGE") {
        return Some(PathBuf::from(p));
    }
    let bundled = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/village.txt");
    bundled.is_file().then_some(bundled)
}

fn criterion_5() -> Outcome {
    let Some(path) = village_path() else {
        return (
            false,
            "Village network not available (set LATSPACE_VILLAGE or add crates/core/data/village.txt)"
                .to_string(),
        );
    };
    let t = Instant::now();
    let file = std::fs::File::open(&path).expect("village file");
    let net = load_edge_list(std::io::BufReader::new(file), EdgeListFormat::Auto).unwrap();
    let model = ClassModel::new(ClassHyper::standard(8)).unwrap();
    let post = run_chains(&model, &net, &McmcConfig::default()).unwrap();
    let xi: Vec<&[usize]> = post.states().map(|s| s.xi.as_slice()).collect();
    let p = co_membership(&xi).unwrap();
    let part = partition_point_estimate(&p, 0.5).unwrap();
    let sizes = cluster_sizes(&part);
    let auc = in_sample_auc(&post, &net).unwrap();
    let elapsed = t.elapsed();
    let ok = (10..=14).contains(&sizes.len())
        && sizes[0] <= 25
        && auc >= 0.80
        && within(elapsed, 20.0);
    (
        ok,
        format!(
            "Village I={} class K=8: {} communities, sizes {:?}, in-sample AUC {auc:.3}, {elapsed:.1?}",
            net.n_actors(),
            sizes.len(),
            sizes
        ),
    )
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let net = datasets::zach();
    let cfg = McmcConfig {
        keep_states: false,
        ..McmcConfig::default()
    };
    let mut best = Vec::new();
    let mut k2 = Vec::new();
    for kind in ModelKind::ALL {
        let mut scan = Vec::new();
        for k in [2, 4, 8] {
            let any = AnyModel::standard(kind, k, net.n_actors()).unwrap();
            let w = with_model!(&any, m => {
                let post = run_chains(m, &net, &cfg).unwrap();
                score_fit(&post, &net).unwrap().waic.waic
            });
            if k == 2 {
                k2.push(format!("{kind} {w:.1}"));
            }
            scan.push((w, k));
        }
        let (w, k) = scan
            .into_iter()
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .unwrap();
        best.push((kind, k, w));
    }
    let elapsed = t.elapsed();
    let (d, c, e) = (best[0].2, best[1].2, best[2].2);
    let order = e < d && e < c;
    let near = (e - 296.8).abs() <= 0.15 * 296.8;
    let ok = order && near && within(elapsed, 30.0);
    (
        ok,
        format!(
            "zach best-K WAIC: distance {d:.1} (K={}), class {c:.1} (K={}), eigen {e:.1} (K={}); eigen smallest: {order}; eigen within 15% of 296.8: {near}; K=2 values: {}; {elapsed:.1?}",
            best[0].1,
            best[1].1,
            best[2].1,
            k2.join(", ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let net = datasets::zach();
    let dyads: Vec<_> = net.observed_dyads().collect();
    let folds = assign_folds(&dyads, 5, 7).unwrap();
    let mut all = folds.concat();
    all.sort_unstable();
    let exact = all == dyads;
    let deterministic = folds == assign_folds(&dyads, 5, 7).unwrap();

    let model = DistanceModel::new(DistanceHyper::elicited(net.n_actors(), 2)).unwrap();
    let short = McmcConfig {
        n_iter: 1500,
        burn_in: 500,
        ..McmcConfig::default()
    };
    let r1 = cross_validate(&model, &net, &short, 5, 7).unwrap();
    let r2 = cross_validate(&model, &net, &short, 5, 7).unwrap();
    let rerun_identical = r1 == r2;

    // AUC protocol: smallest K in {2, 4, 8} that maximizes the mean AUC
    let mut scan = Vec::new();
    for k in [2, 4, 8] {
        let model = DistanceModel::new(DistanceHyper::elicited(net.n_actors(), k)).unwrap();
        let r = cross_validate(&model, &net, &McmcConfig::default(), 5, 7).unwrap();
        scan.push((k, r.auc_mean));
    }
    let (best_k, best_auc) = scan
        .iter()
        .copied()
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let elapsed = t.elapsed();
    let ok = exact && deterministic && rerun_identical && best_auc >= 0.70 && within(elapsed, 10.0);
    (
        ok,
        format!(
            "zach distance 5-fold: partition exact {exact}, seeded folds identical {deterministic}, seeded rerun identical {rerun_identical}, mean AUC by K {}; best K={best_k} AUC {best_auc:.3}; {elapsed:.1?}",
            scan.iter()
                .map(|(k, a)| format!("K={k}: {a:.3}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

/// Slow path of criterion 7, run only on request.
fn criterion_7_jazz() -> Option<Outcome> {
    if std::env::var("LATSPACE_SLOW").ok().as_deref() != Some("1") {
        return None;
    }
    let Ok(path) = std::env::var("LATSPACE_JAZZ") else {
        return Some((false, "LATSPACE_JAZZ not set".to_string()));
    };
    let file = std::fs::File::open(&path).expect("jazz file");
    let net = load_edge_list(std::io::BufReader::new(file), EdgeListFormat::Auto).unwrap();
    let model = DistanceModel::new(DistanceHyper::elicited(net.n_actors(), 8)).unwrap();
    let r = cross_validate(&model, &net, &McmcConfig::default(), 5, 7).unwrap();
    Some((
        (r.auc_mean - 0.971).abs() <= 0.05,
        format!("jazz distance K=8 mean AUC {:.3}", r.auc_mean),
    ))
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut rng = ChainRng::seed_from_u64(88);
    let mut worst = 0.0f64;

    for (b, n) in [(1, 4), (3, 9), (40, 25)] {
        let ll: Vec<Vec<f64>> = (0..b)
            .map(|_| (0..n).map(|_| rng.random::<f64>().max(1e-3).ln()).collect())
            .collect();
        let w = waic(&ll).unwrap();
        let (ow, op) = waic_oracle(&ll);
        worst = worst.max((w.waic - ow).abs()).max((w.p_waic - op).abs());
        let plug: Vec<f64> = (0..n).map(|_| rng.random::<f64>().max(1e-3).ln()).collect();
        let d = dic(&ll, &plug).unwrap();
        let mean_ll: f64 = ll.iter().flatten().sum::<f64>() / b as f64;
        let plug_sum: f64 = plug.iter().sum();
        let op = 2.0 * plug_sum - 2.0 * mean_ll;
        worst = worst
            .max((d.p_dic - op).abs())
            .max((d.dic - (-2.0 * plug_sum + 2.0 * op)).abs());
    }
    for _ in 0..20 {
        let scores: Vec<f64> = (0..20).map(|_| (rng.random::<f64>() * 5.0).floor()).collect();
        let mut labels: Vec<bool> = (0..20).map(|_| rng.random_bool(0.5)).collect();
        labels[0] = true;
        labels[1] = false;
        let a = roc_auc(&scores, &labels).unwrap();
        worst = worst.max((a - auc_oracle(&scores, &labels)).abs());
    }
    for _ in 0..20 {
        let u0: Vec<f64> = (0..20).map(|_| rng.random_range(-2.0..2.0)).collect();
        let ub: Vec<f64> = (0..20).map(|_| rng.random_range(-2.0..2.0)).collect();
        let fit = procrustes_align(&ub, &u0, 10, 2).unwrap();
        worst = worst.max((fit.residual - procrustes_2d_oracle(&ub, &u0)).abs());
    }
    let samples: Vec<Vec<usize>> = (0..10)
        .map(|_| (0..8).map(|_| rng.random_range(0..3)).collect())
        .collect();
    let p = co_membership(&samples).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            let hits = samples.iter().filter(|s| s[i] == s[j]).count() as f64 / 10.0;
            worst = worst.max((p[i][j] - hits).abs());
        }
    }
    let mut partition_ok = true;
    for n in 2..=8 {
        let candidates = all_partitions(n);
        for _ in 0..5 {
            let p = random_co_membership(&mut rng, n);
            let best = candidates
                .iter()
                .map(|c| partition_loss(&p, c, 0.5))
                .fold(f64::INFINITY, f64::min);
            let est = partition_point_estimate(&p, 0.5).unwrap();
            partition_ok &= (partition_loss(&p, &est, 0.5) - best).abs() < 1e-10;
        }
    }
    let elapsed = t.elapsed();
    let ok = worst < 1e-10 && partition_ok && within(elapsed, 1.0);
    (
        ok,
        format!(
            "WAIC/DIC/AUC/Procrustes/co-membership max deviation {worst:.2e}; partition equals exhaustive optimum for I<=8: {partition_ok}; {elapsed:.1?}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChainRng::seed_from_u64(99);
    let n = 10;
    let mut worst = 0.0f64;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
    for round in 0..100 {
        let k = 1 + round % 4;
        let net = sample_random_graph(n, 0.35, &mut rng).unwrap();

        let dm = DistanceModel::new(DistanceHyper::elicited(n, k)).unwrap();
        let s = dm.sample_prior(n, &mut rng);
        // random orthogonal map from Gram–Schmidt, plus a translation
        let mut q: Vec<Vec<f64>> = Vec::new();
        while q.len() < k {
            let mut v: Vec<f64> = (0..k).map(|_| std_normal(&mut rng)).collect();
            for b in &q {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            q.push(v.into_iter().map(|x| x / norm).collect());
        }
        let mut t = s.clone();
        for i in 0..n {
            for c in 0..k {
                t.u[i * k + c] = (0..k).map(|l| s.u[i * k + l] * q[l][c]).sum::<f64>() + 1.3;
            }
        }
        worst = worst.max(rel(dm.loglik(&s, &net), dm.loglik(&t, &net)));

        let cm = ClassModel::new(ClassHyper::standard(k + 1)).unwrap();
        let kc = k + 1;
        let s = cm.sample_prior(n, &mut rng);
        let perm: Vec<usize> = (0..kc).map(|c| (c + 1 + round) % kc).collect();
        let mut t = s.clone();
        t.xi = s.xi.iter().map(|&x| perm[x]).collect();
        for a in 0..kc {
            for b in a..kc {
                t.eta[block_index(perm[a], perm[b], kc)] = s.eta[block_index(a, b, kc)];
            }
        }
        worst = worst.max(rel(cm.loglik(&s, &net), cm.loglik(&t, &net)));

        let em = EigenModel::new(EigenHyper::standard(k)).unwrap();
        let s = em.sample_prior(n, &mut rng);
        let col = round % k;
        let c = 0.5 + rng.random::<f64>() * 3.0;
        let mut flip = s.clone();
        let mut scaled = s.clone();
        scaled.lambda[col] /= c * c;
        for i in 0..n {
            flip.u[i * k + col] = -s.u[i * k + col];
            scaled.u[i * k + col] *= c;
        }
        let l0 = em.loglik(&s, &net);
        worst = worst
            .max(rel(l0, em.loglik(&flip, &net)))
            .max(rel(l0, em.loglik(&scaled, &net)));
    }
    (
        worst <= 1e-12,
        format!("300 randomized symmetry checks, max relative log-likelihood change {worst:.2e}"),
    )
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let mut rng = ChainRng::seed_from_u64(1010);

    // planted three-block network
    let n = 60;
    let truth: Vec<usize> = (0..n).map(|i| i / 20).collect();
    let mut sbm = Network::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if truth[i] == truth[j] { 0.4 } else { 0.05 };
            if rng.random::<f64>() < p {
                sbm.set(i, j, true);
            }
        }
    }
    let model = ClassModel::new(ClassHyper::standard(3)).unwrap();
    let post = run_chains(&model, &sbm, &McmcConfig::default()).unwrap();
    let xi: Vec<&[usize]> = post.states().map(|s| s.xi.as_slice()).collect();
    let est = partition_point_estimate(&co_membership(&xi).unwrap(), 0.5).unwrap();
    let ari = adjusted_rand_index(&est, &truth).unwrap();

    // network drawn from a distance model
    let n = 40;
    let truth_model = DistanceModel::new(DistanceHyper::elicited(n, 2)).unwrap();
    let u: Vec<f64> = (0..2 * n).map(|_| 1.5 * std_normal(&mut rng)).collect();
    let truth_state = DistanceState {
        zeta: 1.0,
        u,
        k: 2,
        sigma2: 2.25,
        omega2: 1.0,
    };
    let dist_net = truth_model.simulate(&truth_state, &Network::empty(n), &mut rng);
    let cfg = McmcConfig {
        keep_states: false,
        ..McmcConfig::default()
    };
    let refit = run_chains(&truth_model, &dist_net, &cfg).unwrap();
    let auc = in_sample_auc(&refit, &dist_net).unwrap();
    // the Erdős–Rényi MLE gives every dyad the same score
    let dyads: Vec<_> = dist_net.observed_dyads().collect();
    let rho = density(&dist_net).unwrap();
    let labels: Vec<bool> = dyads.iter().map(|&(i, j)| dist_net.has_edge(i, j)).collect();
    let baseline = roc_auc(&vec![rho; dyads.len()], &labels).unwrap();

    let elapsed = t.elapsed();
    let ok = ari >= 0.9 && auc >= baseline + 0.15 && within(elapsed, 15.0);
    (
        ok,
        format!(
            "planted SBM I=60: ARI {ari:.3} ({} clusters); distance I=40 K=2 refit AUC {auc:.3} vs ER baseline {baseline:.3}; {elapsed:.1?}",
            cluster_sizes(&est).len()
        ),
    )
}

fn main() {
    let criteria: [(u8, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let filter: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = Vec::new();
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let (ok, detail) = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| (false, "panicked".to_string()));
        line(&format!(
            "criterion {id:>2}: {} | {detail}",
            if ok { "PASS" } else { "FAIL" }
        ));
        if !ok {
            failed.push(id);
        }
        if id == 7 {
            match criterion_7_jazz() {
                Some((ok, detail)) => line(&format!(
                    "criterion  7 (slow jazz path): {} | {detail}",
                    if ok { "PASS" } else { "FAIL" }
                )),
                None => line("criterion  7 (slow jazz path): SKIPPED | set LATSPACE_SLOW=1 and LATSPACE_JAZZ"),
            }
        }
    }
    if failed.is_empty() {
        line("acceptance: all criteria passed");
    } else {
        line(&format!("acceptance: failed criteria {failed:?}"));
        std::process::exit(1);
    }
}
