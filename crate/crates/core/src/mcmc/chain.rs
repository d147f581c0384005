//! Chain driver: burn-in, thinning, parallel chains, and the per-sample
//! reductions (dyad log-likelihoods, posterior mean tie probabilities,
//! scalar traces) every model shares.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{bernoulli_logit_lpmf, expit};
use crate::mcmc::diagnostics::gelman_rubin;
use crate::mcmc::rng::{chain_rng, derive_seed, ChainRng};
use crate::network::{dyad_index, n_dyads, Network};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcConfig {
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub n_chains: usize,
    pub seed: u64,
    pub adapt_during_burnin: bool,
    /// Keep every retained state (needed for exports and predictive checks).
    pub keep_states: bool,
    /// Keep the full retained-sample × dyad log-likelihood matrix.
    pub keep_dyad_loglik: bool,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            n_iter: 60_000,
            burn_in: 10_000,
            thin: 1,
            n_chains: 2,
            seed: 1,
            adapt_during_burnin: true,
            keep_states: true,
            keep_dyad_loglik: false,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_iter == 0 {
            return Err(Error::invalid("n_iter must be positive"));
        }
        if self.burn_in >= self.n_iter {
            return Err(Error::invalid("burn_in must be smaller than n_iter"));
        }
        if self.thin == 0 {
            return Err(Error::invalid("thin must be positive"));
        }
        if self.n_chains == 0 {
            return Err(Error::invalid("n_chains must be positive"));
        }
        Ok(())
    }

    /// Retained samples per chain.
    pub fn n_stored(&self) -> usize {
        (self.n_iter - self.burn_in) / self.thin
    }

    pub fn chain_seeds(&self) -> Vec<u64> {
        (0..self.n_chains as u64)
            .map(|c| derive_seed(self.seed, c))
            .collect()
    }
}

/// A latent space model: prior, likelihood through a per-dyad log-odds, and
/// one full MCMC sweep.
pub trait LatentModel: Sync {
    type State: Clone + Send + Sync + std::fmt::Debug;
    /// Per-chain sampler state: adaptive step sizes and caches.
    type Tuning: Send;

    fn name(&self) -> &'static str;

    /// Latent dimension (number of classes for the class model).
    fn dim(&self) -> usize;

    fn init(&self, net: &Network, rng: &mut ChainRng) -> Result<Self::State>;

    fn tuning(&self, net: &Network, state: &Self::State) -> Self::Tuning;

    fn sweep(
        &self,
        net: &Network,
        state: &mut Self::State,
        tuning: &mut Self::Tuning,
        adapt: bool,
        rng: &mut ChainRng,
    ) -> Result<()>;

    /// Log-odds of a tie between `i` and `j`.
    fn log_odds(&self, state: &Self::State, i: usize, j: usize) -> f64;

    /// Log prior density (up to a constant) including hyperpriors.
    fn log_prior(&self, state: &Self::State) -> f64;

    fn scalar_names(&self) -> Vec<&'static str>;

    fn scalars(&self, state: &Self::State) -> Vec<f64>;

    /// Draw from the full prior for `n_actors` actors.
    fn sample_prior(&self, n_actors: usize, rng: &mut ChainRng) -> Self::State;

    /// Acceptance rates of the Metropolis blocks, labelled.
    fn acceptance(&self, _tuning: &Self::Tuning) -> Vec<(String, f64)> {
        Vec::new()
    }

    /// Column headers of a flattened state.
    fn columns(&self, n_actors: usize) -> Vec<String>;

    fn flatten(&self, state: &Self::State) -> Vec<f64>;

    fn unflatten(&self, n_actors: usize, row: &[f64]) -> Result<Self::State>;

    fn prob(&self, state: &Self::State, i: usize, j: usize) -> f64 {
        crate::math::tie_prob(self.log_odds(state, i, j))
    }

    fn dyad_loglik(&self, state: &Self::State, net: &Network, i: usize, j: usize) -> f64 {
        bernoulli_logit_lpmf(net.y(i, j), self.log_odds(state, i, j))
    }

    fn loglik(&self, state: &Self::State, net: &Network) -> f64 {
        net.observed_dyads()
            .map(|(i, j)| self.dyad_loglik(state, net, i, j))
            .sum()
    }

    /// Replicate network drawn from the sampling model, on the mask of `net`.
    fn simulate(&self, state: &Self::State, net: &Network, rng: &mut ChainRng) -> Network {
        use rand::Rng;
        let mut out = net.clone();
        for i in 0..net.n_actors() {
            for j in (i + 1)..net.n_actors() {
                if net.is_observed(i, j) {
                    let tie = rng.random::<f64>() < self.prob(state, i, j);
                    out.set(i, j, tie);
                }
            }
        }
        out
    }
}

/// Streaming per-dyad reductions of `log p(y_d | draw)` over retained draws:
/// log-sum-exp (for the pointwise predictive density) and the plain sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseAccumulator {
    max: Vec<f64>,
    scaled_sum: Vec<f64>,
    sum: Vec<f64>,
    count: usize,
}

impl PointwiseAccumulator {
    pub fn new(n: usize) -> Self {
        PointwiseAccumulator {
            max: vec![f64::NEG_INFINITY; n],
            scaled_sum: vec![0.0; n],
            sum: vec![0.0; n],
            count: 0,
        }
    }

    pub fn n_dyads(&self) -> usize {
        self.sum.len()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.sum.len());
        for (d, &ll) in row.iter().enumerate() {
            self.sum[d] += ll;
            if ll > self.max[d] {
                self.scaled_sum[d] = self.scaled_sum[d] * (self.max[d] - ll).exp() + 1.0;
                self.max[d] = ll;
            } else {
                self.scaled_sum[d] += (ll - self.max[d]).exp();
            }
        }
        self.count += 1;
    }

    pub fn merge(&mut self, other: &PointwiseAccumulator) {
        assert_eq!(self.sum.len(), other.sum.len());
        for d in 0..self.sum.len() {
            self.sum[d] += other.sum[d];
            let m = self.max[d].max(other.max[d]);
            if m == f64::NEG_INFINITY {
                continue;
            }
            self.scaled_sum[d] = self.scaled_sum[d] * (self.max[d] - m).exp()
                + other.scaled_sum[d] * (other.max[d] - m).exp();
            self.max[d] = m;
        }
        self.count += other.count;
    }

    /// `log E[p(y_d | ·)]` for every dyad.
    pub fn log_mean_lik(&self) -> Vec<f64> {
        let n = self.count as f64;
        self.max
            .iter()
            .zip(&self.scaled_sum)
            .map(|(m, s)| m + s.ln() - n.ln())
            .collect()
    }

    /// `E[log p(y_d | ·)]` for every dyad.
    pub fn mean_loglik(&self) -> Vec<f64> {
        let n = self.count as f64;
        self.sum.iter().map(|s| s / n).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainOutput<S> {
    pub seed: u64,
    pub states: Vec<S>,
    /// `traces[s][t]`: scalar `s` at retained sample `t`.
    pub traces: Vec<Vec<f64>>,
    /// Log likelihood plus log prior at each retained sample.
    pub log_joint: Vec<f64>,
    pub dyad_loglik: Option<Vec<Vec<f64>>>,
    pub pointwise: PointwiseAccumulator,
    /// Sum over retained samples of the tie probability of every dyad
    /// (row-major upper triangle, masked dyads included).
    pub prob_sum: Vec<f64>,
    /// Sum over retained samples of the log-odds of every dyad.
    pub log_odds_sum: Vec<f64>,
    pub n_stored: usize,
    pub acceptance: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosteriorSamples<S> {
    pub model: String,
    pub dim: usize,
    pub n_actors: usize,
    pub config: McmcConfig,
    pub scalar_names: Vec<String>,
    /// Observed dyads, i.e. the columns of the log-likelihood matrix.
    pub dyads: Vec<(usize, usize)>,
    pub chains: Vec<ChainOutput<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhatEntry {
    pub name: String,
    pub rhat: Option<f64>,
}

impl<S> PosteriorSamples<S> {
    pub fn n_samples(&self) -> usize {
        self.chains.iter().map(|c| c.n_stored).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = &S> {
        self.chains.iter().flat_map(|c| c.states.iter())
    }

    pub fn pointwise(&self) -> PointwiseAccumulator {
        let mut acc = PointwiseAccumulator::new(self.dyads.len());
        for c in &self.chains {
            acc.merge(&c.pointwise);
        }
        acc
    }

    /// Posterior mean tie probability of every dyad, row-major upper triangle.
    pub fn mean_probs(&self) -> Vec<f64> {
        let mut out = vec![0.0; n_dyads(self.n_actors)];
        for c in &self.chains {
            for (o, s) in out.iter_mut().zip(&c.prob_sum) {
                *o += s;
            }
        }
        let n = self.n_samples() as f64;
        out.iter_mut().for_each(|o| *o /= n);
        out
    }

    /// Posterior mean log-odds of every dyad, row-major upper triangle.
    pub fn mean_log_odds(&self) -> Vec<f64> {
        let mut out = vec![0.0; n_dyads(self.n_actors)];
        for c in &self.chains {
            for (o, s) in out.iter_mut().zip(&c.log_odds_sum) {
                *o += s;
            }
        }
        let n = self.n_samples() as f64;
        out.iter_mut().for_each(|o| *o /= n);
        out
    }

    pub fn mean_prob(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.mean_probs()[dyad_index(a, b, self.n_actors)]
    }

    /// Dense symmetric matrix of posterior mean tie probabilities (zero
    /// diagonal).
    pub fn mean_prob_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_actors;
        let probs = self.mean_probs();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let p = probs[dyad_index(i, j, n)];
                m[i][j] = p;
                m[j][i] = p;
            }
        }
        m
    }

    /// Retained-sample × dyad log-likelihood rows across chains, if kept.
    pub fn dyad_loglik_matrix(&self) -> Option<Vec<Vec<f64>>> {
        let mut rows = Vec::new();
        for c in &self.chains {
            rows.extend(c.dyad_loglik.as_ref()?.iter().cloned());
        }
        Some(rows)
    }

    /// Trace of scalar `name` for every chain (`log_joint` included).
    pub fn trace(&self, name: &str) -> Option<Vec<Vec<f64>>> {
        if name == "log_joint" {
            return Some(self.chains.iter().map(|c| c.log_joint.clone()).collect());
        }
        let s = self.scalar_names.iter().position(|n| n == name)?;
        Some(self.chains.iter().map(|c| c.traces[s].clone()).collect())
    }

    /// Potential scale reduction for the joint log density and each scalar.
    pub fn rhat(&self) -> Vec<RhatEntry> {
        let mut names = vec!["log_joint".to_string()];
        names.extend(self.scalar_names.iter().cloned());
        names
            .into_iter()
            .map(|name| {
                let rhat = self.trace(&name).and_then(|t| gelman_rubin(&t).ok());
                RhatEntry { name, rhat }
            })
            .collect()
    }
}

/// Runs `cfg.n_chains` independent chains of `model` on `net`.
pub fn run_chains<M: LatentModel>(
    model: &M,
    net: &Network,
    cfg: &McmcConfig,
) -> Result<PosteriorSamples<M::State>> {
    cfg.validate()?;
    let dyads: Vec<(usize, usize)> = net.observed_dyads().collect();
    let seeds = cfg.chain_seeds();
    let chains = seeds
        .par_iter()
        .enumerate()
        .map(|(c, &seed)| run_one_chain(model, net, cfg, &dyads, c, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(PosteriorSamples {
        model: model.name().to_string(),
        dim: model.dim(),
        n_actors: net.n_actors(),
        config: cfg.clone(),
        scalar_names: model.scalar_names().iter().map(|s| s.to_string()).collect(),
        dyads,
        chains,
    })
}

impl<S> ChainOutput<S> {
    fn empty(seed: u64, n_actors: usize, n_observed: usize, n_scalars: usize, cfg: &McmcConfig) -> Self {
        let n_stored = cfg.n_stored();
        ChainOutput {
            seed,
            states: Vec::with_capacity(if cfg.keep_states { n_stored } else { 0 }),
            traces: vec![Vec::with_capacity(n_stored); n_scalars],
            log_joint: Vec::with_capacity(n_stored),
            dyad_loglik: cfg.keep_dyad_loglik.then(|| Vec::with_capacity(n_stored)),
            pointwise: PointwiseAccumulator::new(n_observed),
            prob_sum: vec![0.0; n_dyads(n_actors)],
            log_odds_sum: vec![0.0; n_dyads(n_actors)],
            n_stored: 0,
            acceptance: Vec::new(),
        }
    }
}

/// Folds one retained state into the per-chain reductions. `ll_row` is
/// scratch space of length `dyads.len()`.
fn record<M: LatentModel>(
    out: &mut ChainOutput<M::State>,
    model: &M,
    net: &Network,
    dyads: &[(usize, usize)],
    state: &M::State,
    keep_state: bool,
    ll_row: &mut [f64],
) {
    let n = net.n_actors();
    // one pass over all dyads: probabilities everywhere, log-lik on observed
    let mut d_obs = 0;
    let mut k = 0;
    let mut total_ll = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let x = model.log_odds(state, i, j);
            out.prob_sum[k] += expit(x);
            out.log_odds_sum[k] += x;
            k += 1;
            if d_obs < dyads.len() && dyads[d_obs] == (i, j) {
                let ll = bernoulli_logit_lpmf(net.y(i, j), x);
                ll_row[d_obs] = ll;
                total_ll += ll;
                d_obs += 1;
            }
        }
    }
    out.pointwise.push(ll_row);
    if let Some(m) = out.dyad_loglik.as_mut() {
        m.push(ll_row.to_vec());
    }
    for (t, v) in out.traces.iter_mut().zip(model.scalars(state)) {
        t.push(v);
    }
    out.log_joint.push(total_ll + model.log_prior(state));
    if keep_state {
        out.states.push(state.clone());
    }
    out.n_stored += 1;
}

/// Rebuilds posterior summaries from stored states, e.g. states read back
/// from sample files. `chains[c]` holds the retained states of chain `c`.
pub fn samples_from_states<M: LatentModel>(
    model: &M,
    net: &Network,
    cfg: &McmcConfig,
    chains: Vec<Vec<M::State>>,
) -> Result<PosteriorSamples<M::State>> {
    if chains.iter().all(Vec::is_empty) {
        return Err(Error::Empty("no stored states"));
    }
    let dyads: Vec<(usize, usize)> = net.observed_dyads().collect();
    let n_scalars = model.scalar_names().len();
    let seeds = cfg.chain_seeds();
    let mut outputs = Vec::with_capacity(chains.len());
    for (c, states) in chains.into_iter().enumerate() {
        let seed = seeds.get(c).copied().unwrap_or(0);
        let mut out = ChainOutput::empty(seed, net.n_actors(), dyads.len(), n_scalars, cfg);
        let mut ll_row = vec![0.0; dyads.len()];
        for state in &states {
            record(&mut out, model, net, &dyads, state, cfg.keep_states, &mut ll_row);
        }
        outputs.push(out);
    }
    Ok(PosteriorSamples {
        model: model.name().to_string(),
        dim: model.dim(),
        n_actors: net.n_actors(),
        config: cfg.clone(),
        scalar_names: model.scalar_names().iter().map(|s| s.to_string()).collect(),
        dyads,
        chains: outputs,
    })
}

fn run_one_chain<M: LatentModel>(
    model: &M,
    net: &Network,
    cfg: &McmcConfig,
    dyads: &[(usize, usize)],
    chain: usize,
    seed: u64,
) -> Result<ChainOutput<M::State>> {
    let mut rng = chain_rng(cfg.seed, chain as u64);
    let mut state = model.init(net, &mut rng)?;
    let mut tuning = model.tuning(net, &state);
    let n_scalars = model.scalar_names().len();
    let mut out = ChainOutput::empty(seed, net.n_actors(), dyads.len(), n_scalars, cfg);
    let mut ll_row = vec![0.0; dyads.len()];

    for iter in 0..cfg.n_iter {
        let adapt = cfg.adapt_during_burnin && iter < cfg.burn_in;
        model
            .sweep(net, &mut state, &mut tuning, adapt, &mut rng)
            .map_err(|e| Error::Kernel {
                chain,
                iteration: iter,
                source: Box::new(e),
            })?;
        if iter < cfg.burn_in || (iter - cfg.burn_in + 1) % cfg.thin != 0 {
            continue;
        }
        record(&mut out, model, net, dyads, &state, cfg.keep_states, &mut ll_row);
    }
    out.acceptance = model.acceptance(&tuning);
    Ok(out)
}
