use std::fs;
use std::path::Path;

use latspace::eval::{
    cross_validate, posterior_predictive, ppc_csv, score_fit, EvalReport, PpcStatistic,
};
use latspace::export::{self, Manifest};
use latspace::mcmc::chain::samples_from_states;
use latspace::models::{class, distance, eigen, AnyModel, ClassHyper, DistanceHyper, EigenHyper};
use latspace::network::{load_edge_list, EdgeListFormat};
use latspace::partition::{co_membership, partition_point_estimate};
use latspace::{datasets, with_model, LatentModel, ModelKind, NetStats, Network, PosteriorSamples};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

const RHAT_WARN: f64 = 1.1;

fn load_input(cfg: &RunConfig) -> Result<Network, CliError> {
    let input = cfg
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage("no input network given".into()))?;
    let path = Path::new(input);
    if path.is_file() {
        let file = fs::File::open(path)
            .map_err(|e| CliError::Usage(format!("cannot open {input}: {e}")))?;
        return load_edge_list(std::io::BufReader::new(file), EdgeListFormat::Auto)
            .map_err(|e| CliError::Usage(format!("{input}: {e}")));
    }
    datasets::by_name(input).ok_or_else(|| CliError::Usage(format!("no such file: {input}")))
}

fn merge(base: &mut serde_json::Value, over: &serde_json::Value) -> Result<(), CliError> {
    let over = over
        .as_object()
        .ok_or_else(|| CliError::Usage("hyperparameters must be a JSON object".into()))?;
    let base = base.as_object_mut().expect("hyperparameters serialize to an object");
    for (key, value) in over {
        if !base.contains_key(key) {
            return Err(CliError::Usage(format!("unknown hyperparameter `{key}`")));
        }
        base.insert(key.clone(), value.clone());
    }
    Ok(())
}

/// Model defaults for `(kind, k)`, with the configured overrides applied.
fn build_model(
    kind: ModelKind,
    k: usize,
    n_actors: usize,
    overrides: Option<&serde_json::Value>,
) -> Result<AnyModel, CliError> {
    let mut hyper = AnyModel::standard(kind, k, n_actors)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .hyper_json();
    if let Some(o) = overrides {
        merge(&mut hyper, o)?;
    }
    hyper["k"] = k.into();
    let bad = |e: serde_json::Error| CliError::Usage(format!("invalid hyperparameters: {e}"));
    let usage = |e: latspace::Error| CliError::Usage(e.to_string());
    Ok(match kind {
        ModelKind::Distance => AnyModel::Distance(
            distance::DistanceModel::new(
                serde_json::from_value::<DistanceHyper>(hyper).map_err(bad)?,
            )
            .map_err(usage)?,
        ),
        ModelKind::Class => AnyModel::Class(
            class::ClassModel::new(serde_json::from_value::<ClassHyper>(hyper).map_err(bad)?)
                .map_err(usage)?,
        ),
        ModelKind::Eigen => AnyModel::Eigen(
            eigen::EigenModel::new(serde_json::from_value::<EigenHyper>(hyper).map_err(bad)?)
                .map_err(usage)?,
        ),
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(latspace::Error::from)?;
    write(dir, name, &text)
}

fn fmt_opt(v: Option<f64>, decimals: usize) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.decimals$}"))
}

pub fn describe(cfg: &RunConfig) -> Result<(), CliError> {
    let net = load_input(cfg)?;
    let stats = NetStats::compute(&net)?;
    let dir = cfg.output_dir();
    write(&dir, "stats.csv", &stats.to_csv())?;
    write_json(&dir, "stats.json", &stats)?;
    println!("n_actors,{}", stats.n_actors);
    println!("edges,{}", stats.edge_count);
    println!("density,{:.3}", stats.density);
    println!("transitivity,{}", fmt_opt(stats.transitivity, 3));
    println!("assortativity,{}", fmt_opt(stats.assortativity, 3));
    Ok(())
}

/// Runs the chains and writes what every model shares: sample files,
/// manifest, R-hat table and the posterior mean tie-probability matrix.
fn fit_and_export<M: LatentModel>(
    cfg: &RunConfig,
    net: &Network,
    model: &M,
    any: &AnyModel,
    dir: &Path,
) -> Result<PosteriorSamples<M::State>, CliError> {
    let post = latspace::run_chains(model, net, &cfg.mcmc(true))?;
    let files = export::write_samples(dir, model, &post)?;
    let rhat = post.rhat();
    let warnings: Vec<String> = rhat
        .iter()
        .filter(|e| e.rhat.is_some_and(|r| r > RHAT_WARN))
        .map(|e| format!("R-hat of {} is {:.3} (> {RHAT_WARN})", e.name, e.rhat.unwrap()))
        .collect();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let manifest = Manifest {
        model: model.name().to_string(),
        k: model.dim(),
        n_actors: net.n_actors(),
        hyper: any.hyper_json(),
        run: serde_json::to_value(cfg).map_err(latspace::Error::from)?,
        columns: model.columns(net.n_actors()),
        sample_files: files,
        seeds: post.chains.iter().map(|c| c.seed).collect(),
        n_stored: post.chains.iter().map(|c| c.n_stored).collect(),
        acceptance: post.chains.iter().map(|c| c.acceptance.clone()).collect(),
        rhat: rhat.clone(),
        warnings,
    };
    export::write_manifest(dir, &manifest)?;
    write(dir, "rhat.csv", &export::rhat_csv(&rhat))?;
    write(
        dir,
        "probabilities.csv",
        &export::matrix_csv(&post.mean_prob_matrix(), net.labels()),
    )?;
    Ok(post)
}

pub fn fit(cfg: &RunConfig) -> Result<(), CliError> {
    let net = load_input(cfg)?;
    let any = build_model(cfg.model, cfg.k, net.n_actors(), cfg.hyper.as_ref())?;
    let dir = cfg.output_dir();
    let labels = net.labels().to_vec();
    let scores = match &any {
        AnyModel::Distance(m) => {
            let post = fit_and_export(cfg, &net, m, &any, &dir)?;
            let aligned = distance::align_samples(&post)?;
            let states: Vec<_> = aligned.states().collect();
            let rows = distance::summarize_positions(&states)?;
            write(&dir, "positions.csv", &export::positions_csv(&rows, &labels))?;
            score_fit(&post, &net)?
        }
        AnyModel::Class(m) => {
            let post = fit_and_export(cfg, &net, m, &any, &dir)?;
            let xi: Vec<&[usize]> = post.states().map(|s| s.xi.as_slice()).collect();
            let p = co_membership(&xi)?;
            write(&dir, "comembership.csv", &export::matrix_csv(&p, &labels))?;
            let part = partition_point_estimate(&p, cfg.rel_cost)?;
            write(&dir, "partition.csv", &export::partition_csv(&part))?;
            write(&dir, "cluster_sizes.json", &export::cluster_sizes_json(&part)?)?;
            println!("clusters,{}", part.iter().max().map_or(0, |m| m + 1));
            score_fit(&post, &net)?
        }
        AnyModel::Eigen(m) => {
            let post = fit_and_export(cfg, &net, m, &any, &dir)?;
            let states: Vec<_> = post.states().collect();
            write(&dir, "lambda.csv", &export::lambda_csv(&eigen::summarize_lambda(&states)?))?;
            let as_positions: Vec<distance::DistanceState> = states
                .iter()
                .map(|s| distance::DistanceState {
                    zeta: s.zeta,
                    u: s.u.clone(),
                    k: s.k(),
                    sigma2: s.sigma2,
                    omega2: s.omega2,
                })
                .collect();
            let refs: Vec<_> = as_positions.iter().collect();
            let rows = distance::summarize_positions(&refs)?;
            write(&dir, "positions.csv", &export::positions_csv(&rows, &labels))?;
            score_fit(&post, &net)?
        }
    };
    println!("model,{}", any.kind());
    println!("K,{}", cfg.k);
    println!("samples_per_chain,{}", cfg.mcmc(true).n_stored());
    println!("in_sample_auc,{}", fmt_opt(scores.in_sample_auc, 3));
    println!("waic,{:.1}", scores.waic.waic);
    println!("dic,{:.1}", scores.dic.dic);
    println!("output,{}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct CvOutput<'a> {
    model: ModelKind,
    k: usize,
    seed: u64,
    #[serde(flatten)]
    report: &'a latspace::eval::CvReport,
}

pub fn cv(cfg: &RunConfig) -> Result<(), CliError> {
    let net = load_input(cfg)?;
    let any = build_model(cfg.model, cfg.k, net.n_actors(), cfg.hyper.as_ref())?;
    let report = with_model!(&any, m => cross_validate(m, &net, &cfg.mcmc(false), cfg.n_folds, cfg.seed))?;
    let dir = cfg.output_dir();
    write_json(
        &dir,
        "cv.json",
        &CvOutput {
            model: cfg.model,
            k: cfg.k,
            seed: cfg.seed,
            report: &report,
        },
    )?;
    for (f, auc) in report.auc_per_fold.iter().enumerate() {
        println!("auc_fold_{},{auc:.3}", f + 1);
    }
    println!("auc_mean,{:.3}", report.auc_mean);
    Ok(())
}

fn gof_report<M: LatentModel>(
    cfg: &RunConfig,
    net: &Network,
    model: &M,
    post: &PosteriorSamples<M::State>,
) -> Result<EvalReport, CliError> {
    let scores = score_fit(post, net)?;
    let states: Vec<&M::State> = post.states().collect();
    let ppc = posterior_predictive(
        model,
        &states,
        net,
        &PpcStatistic::DEFAULT,
        cfg.max_replicates,
        cfg.seed,
    )?;
    Ok(EvalReport {
        model: model.name().to_string(),
        k: model.dim(),
        n_samples: post.n_samples(),
        waic: scores.waic.waic,
        p_waic: scores.waic.p_waic,
        dic: scores.dic.dic,
        p_dic: scores.dic.p_dic,
        in_sample_auc: scores.in_sample_auc,
        auc_per_fold: Vec::new(),
        auc_mean: None,
        ppc: ppc.records,
        warnings: ppc.warnings,
    })
}

/// Reloads the states of an earlier fit and rebuilds its reductions.
fn reload<M: LatentModel>(
    model: &M,
    net: &Network,
    run: &RunConfig,
    dir: &Path,
    manifest: &Manifest,
) -> Result<PosteriorSamples<M::State>, CliError> {
    let rows = export::read_sample_rows(dir, manifest)?;
    let chains = rows
        .iter()
        .map(|chain| {
            chain
                .iter()
                .map(|r| model.unflatten(manifest.n_actors, r))
                .collect::<latspace::Result<Vec<_>>>()
        })
        .collect::<latspace::Result<Vec<_>>>()?;
    Ok(samples_from_states(model, net, &run.mcmc(true), chains)?)
}

pub fn gof(cfg: &RunConfig) -> Result<(), CliError> {
    let dir = cfg.output_dir();
    let report = if cfg.refit {
        let net = load_input(cfg)?;
        let any = build_model(cfg.model, cfg.k, net.n_actors(), cfg.hyper.as_ref())?;
        with_model!(&any, m => {
            let post = latspace::run_chains(m, &net, &cfg.mcmc(true))?;
            gof_report(cfg, &net, m, &post)
        })?
    } else {
        let samples = cfg.samples.as_ref().ok_or_else(|| {
            CliError::Usage("gof needs --samples DIR from an earlier fit, or --refit".into())
        })?;
        let manifest = export::read_manifest(samples).map_err(|e| {
            CliError::Usage(format!("cannot read samples in {}: {e}", samples.display()))
        })?;
        let run: RunConfig = serde_json::from_value(manifest.run.clone())
            .map_err(|e| CliError::Usage(format!("manifest run config: {e}")))?;
        let mut input_cfg = run.clone();
        if cfg.input.is_some() {
            input_cfg.input = cfg.input.clone();
        }
        let net = load_input(&input_cfg)?;
        if net.n_actors() != manifest.n_actors {
            return Err(CliError::Usage(format!(
                "samples are for {} actors, network has {}",
                manifest.n_actors,
                net.n_actors()
            )));
        }
        let kind: ModelKind = manifest.model.parse().map_err(|e: latspace::Error| {
            CliError::Usage(e.to_string())
        })?;
        let any = build_model(kind, manifest.k, net.n_actors(), Some(&manifest.hyper))?;
        with_model!(&any, m => {
            let post = reload(m, &net, &run, samples, &manifest)?;
            gof_report(cfg, &net, m, &post)
        })?
    };
    write_json(&dir, "gof.json", &report)?;
    write(&dir, "ppc.csv", &ppc_csv(&report.ppc))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("waic,{:.1}", report.waic);
    println!("p_waic,{:.1}", report.p_waic);
    println!("dic,{:.1}", report.dic);
    println!("p_dic,{:.1}", report.p_dic);
    for r in &report.ppc {
        println!(
            "{},{},{:.3},[{:.3},{:.3}],[{:.3},{:.3}]",
            r.stat,
            fmt_opt(r.observed, 3),
            r.mean,
            r.q025,
            r.q975,
            r.q005,
            r.q995
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct CompareRow {
    model: ModelKind,
    k: usize,
    waic: f64,
    p_waic: f64,
    dic: f64,
    p_dic: f64,
    /// Smallest K attaining this model's minimum WAIC.
    selected: bool,
    /// Selected row with the lowest WAIC across models.
    winner: bool,
}

/// Marks the per-model best K (ties to the smaller K) and the overall
/// winner among those.
fn select(rows: &mut [CompareRow]) {
    let mut best: Vec<usize> = Vec::new();
    for kind in ModelKind::ALL {
        let pick = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.model == kind)
            .min_by(|a, b| a.1.waic.total_cmp(&b.1.waic).then(a.1.k.cmp(&b.1.k)))
            .map(|(i, _)| i);
        if let Some(i) = pick {
            rows[i].selected = true;
            best.push(i);
        }
    }
    if let Some(&w) = best.iter().min_by(|&&a, &&b| rows[a].waic.total_cmp(&rows[b].waic)) {
        rows[w].winner = true;
    }
}

pub fn compare(cfg: &RunConfig) -> Result<(), CliError> {
    let net = load_input(cfg)?;
    let mut rows = Vec::new();
    for &kind in &cfg.models {
        for &k in &cfg.ks {
            let any = build_model(kind, k, net.n_actors(), cfg.hyper.as_ref())?;
            let scores = with_model!(&any, m => {
                let post = latspace::run_chains(m, &net, &cfg.mcmc(false))?;
                score_fit(&post, &net)
            })?;
            rows.push(CompareRow {
                model: kind,
                k,
                waic: scores.waic.waic,
                p_waic: scores.waic.p_waic,
                dic: scores.dic.dic,
                p_dic: scores.dic.p_dic,
                selected: false,
                winner: false,
            });
        }
    }
    select(&mut rows);
    let dir = cfg.output_dir();
    let mut csv = String::from("model,k,waic,p_waic,dic,p_dic,selected,winner\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.model, r.k, r.waic, r.p_waic, r.dic, r.p_dic, r.selected, r.winner
        ));
    }
    write(&dir, "compare.csv", &csv)?;
    write_json(&dir, "compare.json", &rows)?;
    println!("model,K,waic");
    for r in rows.iter().filter(|r| r.selected) {
        let mark = if r.winner { " *" } else { "" };
        println!("{},{},{:.1}{mark}", r.model, r.k, r.waic);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(model: ModelKind, k: usize, waic: f64) -> CompareRow {
        CompareRow {
            model,
            k,
            waic,
            p_waic: 0.0,
            dic: 0.0,
            p_dic: 0.0,
            selected: false,
            winner: false,
        }
    }

    #[test]
    fn ties_go_to_smaller_k() {
        let mut rows = vec![
            row(ModelKind::Eigen, 4, 100.0),
            row(ModelKind::Eigen, 2, 100.0),
            row(ModelKind::Distance, 2, 150.0),
        ];
        select(&mut rows);
        assert!(rows[1].selected && rows[1].winner);
        assert!(!rows[0].selected);
        assert!(rows[2].selected && !rows[2].winner);
    }

    #[test]
    fn single_row_wins() {
        let mut rows = vec![row(ModelKind::Class, 3, 10.0)];
        select(&mut rows);
        assert!(rows[0].selected && rows[0].winner);
    }

    #[test]
    fn hyper_override_merges() {
        let o = serde_json::json!({"a_tau": 5.0});
        let any = build_model(ModelKind::Class, 3, 10, Some(&o)).unwrap();
        match any {
            AnyModel::Class(m) => {
                assert_eq!(m.hyper.a_tau, 5.0);
                assert_eq!(m.hyper.b_tau, 3.0);
            }
            _ => unreachable!(),
        }
        let bad = serde_json::json!({"nope": 1});
        assert!(build_model(ModelKind::Class, 3, 10, Some(&bad)).is_err());
        assert!(build_model(ModelKind::Eigen, 0, 10, None).is_err());
    }
}
