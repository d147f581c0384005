use crate::error::{Error, Result};
use crate::math::{mean, variance};

/// Gelman–Rubin potential scale reduction over equally long chains (longer
/// chains are truncated to the shortest).
pub fn gelman_rubin(chains: &[Vec<f64>]) -> Result<f64> {
    if chains.len() < 2 {
        return Err(Error::invalid("R-hat needs at least two chains"));
    }
    let n = chains.iter().map(Vec::len).min().unwrap_or(0);
    if n < 2 {
        return Err(Error::invalid("R-hat needs at least two draws per chain"));
    }
    let trimmed: Vec<&[f64]> = chains.iter().map(|c| &c[..n]).collect();
    let means: Vec<f64> = trimmed.iter().map(|c| mean(c)).collect();
    let within = mean(&trimmed.iter().map(|c| variance(c)).collect::<Vec<_>>());
    if within <= 0.0 || !within.is_finite() {
        return Err(Error::Undefined {
            statistic: "R-hat",
            reason: "zero within-chain variance",
        });
    }
    let nf = n as f64;
    let between = nf * variance(&means);
    let pooled = (nf - 1.0) / nf * within + between / nf;
    Ok((pooled / within).sqrt())
}

/// Monte Carlo standard error of the mean by non-overlapping batch means.
pub fn batch_means_se(xs: &[f64], n_batches: usize) -> f64 {
    let size = xs.len() / n_batches.max(1);
    if size == 0 {
        return (variance(xs) / xs.len() as f64).sqrt();
    }
    let batch_means: Vec<f64> = xs
        .chunks_exact(size)
        .take(n_batches)
        .map(mean)
        .collect();
    (variance(&batch_means) / batch_means.len() as f64).sqrt()
}

/// Effective sample size implied by the batch-means standard error.
pub fn effective_sample_size(xs: &[f64], n_batches: usize) -> f64 {
    let se = batch_means_se(xs, n_batches);
    if se == 0.0 {
        return xs.len() as f64;
    }
    variance(xs) / (se * se)
}
