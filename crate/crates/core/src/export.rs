//! Plain-text exports: sample files with a JSON manifest, and the CSV/JSON
//! summary tables produced after a fit.
//!
//! Floating-point values are written with Rust's shortest round-trip
//! formatting, so reading a sample file back reproduces every state exactly.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcmc::chain::{LatentModel, PosteriorSamples, RhatEntry};
use crate::models::distance::PositionSummary;
use crate::models::eigen::LambdaSummary;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Description of a sample directory; enough to reload the states and to
/// repeat the run that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub model: String,
    pub k: usize,
    pub n_actors: usize,
    pub hyper: serde_json::Value,
    /// The full run configuration of the producing command.
    pub run: serde_json::Value,
    pub columns: Vec<String>,
    pub sample_files: Vec<String>,
    pub seeds: Vec<u64>,
    pub n_stored: Vec<usize>,
    pub acceptance: Vec<Vec<(String, f64)>>,
    pub rhat: Vec<RhatEntry>,
    pub warnings: Vec<String>,
}

/// Writes one CSV per chain (`iter` then the model's columns) and returns
/// the manifest; the manifest itself is written by [`write_manifest`].
pub fn write_samples<M: LatentModel>(
    dir: &Path,
    model: &M,
    samples: &PosteriorSamples<M::State>,
) -> Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let columns = model.columns(samples.n_actors);
    let mut files = Vec::new();
    for (c, chain) in samples.chains.iter().enumerate() {
        let name = format!("samples_chain{}.csv", c + 1);
        let mut w = BufWriter::new(fs::File::create(dir.join(&name))?);
        writeln!(w, "iter,{}", columns.join(","))?;
        for (t, state) in chain.states.iter().enumerate() {
            let iter = samples.config.burn_in + (t + 1) * samples.config.thin;
            write!(w, "{iter}")?;
            for v in model.flatten(state) {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        files.push(name);
    }
    Ok(files)
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, serde_json::to_string_pretty(manifest)?)?;
    Ok(path)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads every chain listed in the manifest as rows of flattened states
/// (the `iter` column dropped).
pub fn read_sample_rows(dir: &Path, manifest: &Manifest) -> Result<Vec<Vec<Vec<f64>>>> {
    manifest
        .sample_files
        .iter()
        .map(|f| read_sample_file(&dir.join(f), manifest.columns.len()))
        .collect()
}

fn read_sample_file(path: &Path, n_columns: usize) -> Result<Vec<Vec<f64>>> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut rows = Vec::new();
    for (lineno, line) in reader.lines().enumerate().skip(1) {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .skip(1)
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|_| Error::Parse {
                line: lineno + 1,
                content: line.chars().take(60).collect(),
            })?;
        if row.len() != n_columns {
            return Err(Error::Dimension(format!(
                "{}: line {} has {} values, expected {n_columns}",
                path.display(),
                lineno + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `param,rhat`; undefined values as `NA`.
pub fn rhat_csv(entries: &[RhatEntry]) -> String {
    let mut s = String::from("param,rhat\n");
    for e in entries {
        let v = e.rhat.map_or_else(|| "NA".to_string(), |r| r.to_string());
        s.push_str(&format!("{},{v}\n", e.name));
    }
    s
}

/// Square matrix with a header row and a leading label column.
pub fn matrix_csv(m: &[Vec<f64>], labels: &[String]) -> String {
    let mut s = String::from("actor");
    for l in labels {
        s.push(',');
        s.push_str(l);
    }
    s.push('\n');
    for (row, l) in m.iter().zip(labels) {
        s.push_str(l);
        for v in row {
            s.push_str(&format!(",{v}"));
        }
        s.push('\n');
    }
    s
}

/// `actor,label,dim,mean,q025,q975`.
pub fn positions_csv(rows: &[PositionSummary], labels: &[String]) -> String {
    let mut s = String::from("actor,label,dim,mean,q025,q975\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.actor, labels[r.actor], r.dim, r.posterior_mean, r.q025, r.q975
        ));
    }
    s
}

/// `actor,cluster` with 1-based cluster ids.
pub fn partition_csv(labels: &[usize]) -> String {
    let mut s = String::from("actor,cluster\n");
    for (i, l) in labels.iter().enumerate() {
        s.push_str(&format!("{i},{}\n", l + 1));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSizes {
    pub n_clusters: usize,
    /// Sizes, largest first.
    pub sizes: Vec<usize>,
    /// `histogram[s]`: number of clusters of size `s`.
    pub histogram: Vec<usize>,
}

pub fn cluster_sizes_json(labels: &[usize]) -> Result<String> {
    let sizes = crate::partition::cluster_sizes(labels);
    let max = sizes.first().copied().unwrap_or(0);
    let mut histogram = vec![0; max + 1];
    for &s in &sizes {
        histogram[s] += 1;
    }
    Ok(serde_json::to_string_pretty(&ClusterSizes {
        n_clusters: sizes.len(),
        sizes,
        histogram,
    })?)
}

/// `dim,mean,q025,q975`.
pub fn lambda_csv(rows: &[LambdaSummary]) -> String {
    let mut s = String::from("dim,mean,q025,q975\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{}\n", r.dim, r.mean, r.q025, r.q975));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_csv_is_one_based() {
        assert_eq!(partition_csv(&[0, 1, 0]), "actor,cluster\n0,1\n1,2\n2,1\n");
    }

    #[test]
    fn cluster_histogram() {
        let json = cluster_sizes_json(&[0, 0, 1, 2, 2, 2]).unwrap();
        let c: ClusterSizes = serde_json::from_str(&json).unwrap();
        assert_eq!(c.sizes, vec![3, 2, 1]);
        assert_eq!(c.histogram, vec![0, 1, 1, 1]);
    }

    #[test]
    fn rhat_na() {
        let e = [RhatEntry {
            name: "zeta".into(),
            rhat: None,
        }];
        assert_eq!(rhat_csv(&e), "param,rhat\nzeta,NA\n");
    }
}
