//! Undirected binary networks, edge-list ingestion, descriptive statistics and
//! the Erdős–Rényi baseline.
//!
//! Adjacency is stored densely (one byte per ordered pair) together with a
//! symmetric observation mask. Unobserved dyads always carry `y = 0` and are
//! skipped by every sum in this crate.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How actor identifiers in an edge list are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeListFormat {
    /// Integer ids are used as 0-based indices, anything else is a label.
    #[default]
    Auto,
    /// Every identifier is a 0-based actor index.
    Index,
    /// Identifiers are opaque labels numbered in order of first appearance.
    Label,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    n: usize,
    adj: Vec<u8>,
    observed: Vec<bool>,
    labels: Vec<String>,
}

/// Number of unordered pairs among `n` actors.
pub fn n_dyads(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of dyad `(i, j)`, `i < j`, in row-major upper-triangular order.
#[inline]
pub fn dyad_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl Network {
    /// Empty, fully observed network on `n` actors labelled `0..n`.
    pub fn empty(n: usize) -> Self {
        let mut observed = vec![true; n * n];
        for i in 0..n {
            observed[i * n + i] = false;
        }
        Network {
            n,
            adj: vec![0; n * n],
            observed,
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut net = Network::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                net.set(i, j, true);
            }
        }
        net
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut net = Network::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!(
                    "edge ({i}, {j}) out of range for {n} actors"
                )));
            }
            if i == j {
                return Err(Error::invalid(format!("self-loop on actor {i}")));
            }
            net.set(i, j, true);
        }
        Ok(net)
    }

    /// Builds a network from a dense 0/1 matrix; errors unless it is
    /// symmetric, binary and has an empty diagonal.
    pub fn from_adjacency(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut net = Network::empty(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 || v != rows[j][i] || (i == j && v != 0) {
                    return Err(Error::invalid(format!(
                        "adjacency entry ({i}, {j}) breaks symmetry/binary/zero-diagonal"
                    )));
                }
                if i < j && v == 1 {
                    net.set(i, j, true);
                }
            }
        }
        Ok(net)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Dimension(format!(
                "{} labels for {} actors",
                labels.len(),
                self.n
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn n_actors(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sets or clears the tie between `i` and `j` (marking the dyad observed).
    pub fn set(&mut self, i: usize, j: usize, tie: bool) {
        assert!(i != j, "self-loops are not allowed");
        let n = self.n;
        let v = u8::from(tie);
        self.adj[i * n + j] = v;
        self.adj[j * n + i] = v;
        self.observed[i * n + j] = true;
        self.observed[j * n + i] = true;
    }

    #[inline]
    pub fn y(&self, i: usize, j: usize) -> u8 {
        self.adj[i * self.n + j]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j] == 1
    }

    #[inline]
    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.observed[i * self.n + j]
    }

    /// Removes a dyad from the likelihood; its value becomes 0.
    pub fn mask(&mut self, i: usize, j: usize) {
        let n = self.n;
        self.adj[i * n + j] = 0;
        self.adj[j * n + i] = 0;
        self.observed[i * n + j] = false;
        self.observed[j * n + i] = false;
    }

    /// Copy of the network with every listed dyad masked out.
    pub fn masked(&self, dyads: &[(usize, usize)]) -> Self {
        let mut out = self.clone();
        for &(i, j) in dyads {
            out.mask(i, j);
        }
        out
    }

    pub fn fully_observed(&self) -> bool {
        self.observed_dyads().count() == n_dyads(self.n)
    }

    /// Observed dyads `(i, j)` with `i < j`, row-major.
    pub fn observed_dyads(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.observed[i * n + j])
    }

    pub fn n_observed_dyads(&self) -> usize {
        self.observed_dyads().count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.observed_dyads().filter(move |&(i, j)| self.has_edge(i, j))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn degree(&self, i: usize) -> usize {
        let row = &self.adj[i * self.n..(i + 1) * self.n];
        row.iter().map(|&v| v as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    /// Same network with actors relabelled: actor `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut out = Network::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if self.is_observed(i, j) {
                    out.set(perm[i], perm[j], self.has_edge(i, j));
                } else {
                    out.mask(perm[i], perm[j]);
                }
            }
        }
        let mut labels = vec![String::new(); n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
        }
        out.labels = labels;
        out
    }
}

// ---------------------------------------------------------------------------
// Edge lists

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

/// `# nodes: N` and `# node: label` are directives; other `#` lines are
/// comments.
fn directive(line: &str) -> Option<(&str, &str)> {
    let body = line.strip_prefix('#')?.trim();
    let (key, value) = body.split_once(':')?;
    let key = key.trim();
    matches!(key, "nodes" | "node").then(|| (key, value.trim()))
}

fn tokens(line: &str) -> Vec<&str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect()
}

/// Reads an edge list (whitespace- or comma-separated, `#`/`%` comments).
pub fn load_edge_list<R: BufRead>(source: R, format: EdgeListFormat) -> Result<Network> {
    load_edge_list_with_nodes(source, format, &[])
}

/// As [`load_edge_list`], pre-registering `nodes` (in order) so that isolated
/// actors are kept and indices follow the node list.
pub fn load_edge_list_with_nodes<R: BufRead>(
    source: R,
    format: EdgeListFormat,
    nodes: &[String],
) -> Result<Network> {
    struct Line {
        number: usize,
        a: String,
        b: String,
    }
    let mut lines = Vec::new();
    let mut declared_n: Option<usize> = None;
    let mut declared_labels: Vec<String> = nodes.to_vec();

    for (idx, raw) in source.lines().enumerate() {
        let number = idx + 1;
        let raw = raw?;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = directive(line) {
            match key {
                "nodes" => {
                    let n = value.parse::<usize>().map_err(|_| Error::Parse {
                        line: number,
                        content: raw.clone(),
                    })?;
                    declared_n = Some(n);
                }
                _ => declared_labels.push(value.to_string()),
            }
            continue;
        }
        if is_comment(line) {
            continue;
        }
        let toks = tokens(line);
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: number,
                content: raw.clone(),
            });
        }
        if toks[0] == toks[1] {
            return Err(Error::SelfLoop {
                line: number,
                actor: toks[0].to_string(),
            });
        }
        lines.push(Line {
            number,
            a: toks[0].to_string(),
            b: toks[1].to_string(),
        });
    }

    let all_numeric = lines
        .iter()
        .all(|l| l.a.parse::<usize>().is_ok() && l.b.parse::<usize>().is_ok());
    let as_index = match format {
        EdgeListFormat::Index => true,
        EdgeListFormat::Label => false,
        EdgeListFormat::Auto => all_numeric && declared_labels.is_empty(),
    };

    if as_index {
        let mut pairs = Vec::with_capacity(lines.len());
        let mut max_id = None;
        for l in &lines {
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: l.number,
                    content: format!("{} {}", l.a, l.b),
                })
            };
            let (a, b) = (parse(&l.a)?, parse(&l.b)?);
            max_id = Some(max_id.unwrap_or(0).max(a).max(b));
            pairs.push((a, b));
        }
        let n_from_edges = max_id.map_or(0, |m| m + 1);
        let n = match declared_n {
            Some(d) if d < n_from_edges => {
                return Err(Error::invalid(format!(
                    "header declares {d} actors but ids reach {}",
                    n_from_edges - 1
                )))
            }
            Some(d) => d,
            None => n_from_edges,
        };
        return Network::from_edges(n, &pairs);
    }

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut intern = |s: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(s) {
            return i;
        }
        labels.push(s.to_string());
        index.insert(s.to_string(), labels.len() - 1);
        labels.len() - 1
    };
    for l in &declared_labels {
        intern(l, &mut labels);
    }
    let pairs: Vec<(usize, usize)> = lines
        .iter()
        .map(|l| (intern(&l.a, &mut labels), intern(&l.b, &mut labels)))
        .collect();
    if let Some(d) = declared_n {
        if d != labels.len() {
            return Err(Error::invalid(format!(
                "header declares {d} actors but the file names {}",
                labels.len()
            )));
        }
    }
    Network::from_edges(labels.len(), &pairs)?.with_labels(labels)
}

/// Writes a network so that [`load_edge_list`] reproduces its adjacency:
/// a `# nodes:` header, `# node:` lines for non-index labels, then one
/// edge per line.
pub fn save_edge_list<W: Write>(net: &Network, mut out: W) -> Result<()> {
    let index_labels = net
        .labels
        .iter()
        .enumerate()
        .all(|(i, l)| *l == i.to_string());
    writeln!(out, "# nodes: {}", net.n)?;
    if !index_labels {
        for l in &net.labels {
            writeln!(out, "# node: {l}")?;
        }
    }
    for (i, j) in net.edges() {
        writeln!(out, "{} {}", net.labels[i], net.labels[j])?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Descriptive statistics

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetStats {
    pub n_actors: usize,
    pub edge_count: usize,
    pub density: f64,
    pub transitivity: Option<f64>,
    pub assortativity: Option<f64>,
    pub degree_sequence: Vec<usize>,
}

impl NetStats {
    pub fn compute(net: &Network) -> Result<Self> {
        Ok(NetStats {
            n_actors: net.n_actors(),
            edge_count: net.edge_count(),
            density: density(net)?,
            transitivity: transitivity(net).ok(),
            assortativity: degree_assortativity(net).ok(),
            degree_sequence: net.degrees(),
        })
    }

    /// `stat,value` rows; undefined statistics are written as `NA`.
    pub fn to_csv(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
        let mut s = String::from("stat,value\n");
        s.push_str(&format!("n_actors,{}\n", self.n_actors));
        s.push_str(&format!("edge_count,{}\n", self.edge_count));
        s.push_str(&format!("density,{}\n", self.density));
        s.push_str(&format!("transitivity,{}\n", fmt(self.transitivity)));
        s.push_str(&format!("assortativity,{}\n", fmt(self.assortativity)));
        s
    }
}

/// Realized ties over observed dyads.
pub fn density(net: &Network) -> Result<f64> {
    if net.n_actors() < 2 {
        return Err(Error::invalid("density needs at least two actors"));
    }
    let observed = net.n_observed_dyads();
    if observed == 0 {
        return Err(Error::Undefined {
            statistic: "density",
            reason: "no observed dyads",
        });
    }
    Ok(net.edge_count() as f64 / observed as f64)
}

/// Global clustering coefficient: 3 × triangles / connected triples.
pub fn transitivity(net: &Network) -> Result<f64> {
    let n = net.n_actors();
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| net.has_edge(i, j)).collect())
        .collect();
    let triples: usize = neighbours
        .iter()
        .map(|nb| nb.len() * nb.len().saturating_sub(1) / 2)
        .sum();
    if triples == 0 {
        return Err(Error::Undefined {
            statistic: "transitivity",
            reason: "no connected triples",
        });
    }
    let mut triangles = 0usize;
    for (i, nb) in neighbours.iter().enumerate() {
        for (a, &j) in nb.iter().enumerate() {
            if j <= i {
                continue;
            }
            for &k in &nb[a + 1..] {
                if k > j && net.has_edge(j, k) {
                    triangles += 1;
                }
            }
        }
    }
    Ok(3.0 * triangles as f64 / triples as f64)
}

/// Pearson correlation of endpoint degrees, each edge counted in both
/// orientations.
pub fn degree_assortativity(net: &Network) -> Result<f64> {
    let deg = net.degrees();
    let mut m = 0.0;
    let (mut sx, mut sxx, mut sxy) = (0.0, 0.0, 0.0);
    for (i, j) in net.edges() {
        let (a, b) = (deg[i] as f64, deg[j] as f64);
        // both orientations: x and y marginals coincide
        sx += a + b;
        sxx += a * a + b * b;
        sxy += 2.0 * a * b;
        m += 2.0;
    }
    if m == 0.0 {
        return Err(Error::Undefined {
            statistic: "assortativity",
            reason: "no edges",
        });
    }
    let mean = sx / m;
    let var = sxx / m - mean * mean;
    if var <= 1e-12 * (sxx / m).max(1.0) {
        return Err(Error::Undefined {
            statistic: "assortativity",
            reason: "endpoint degrees have zero variance",
        });
    }
    Ok((sxy / m - mean * mean) / var)
}

// ---------------------------------------------------------------------------
// Erdős–Rényi baseline

pub fn sample_random_graph<R: Rng + ?Sized>(n: usize, theta: f64, rng: &mut R) -> Result<Network> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::invalid(format!("theta = {theta} is not a probability")));
    }
    let mut net = Network::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < theta {
                net.set(i, j, true);
            }
        }
    }
    Ok(net)
}

/// Bernoulli(θ) log-likelihood over observed dyads. Returns `-inf` when θ
/// sits on a boundary the data contradict (θ = 0 with a tie, θ = 1 with a
/// non-tie).
pub fn loglik_random_graph(net: &Network, theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::invalid(format!("theta = {theta} is not a probability")));
    }
    let ties = net.edge_count() as f64;
    let non_ties = net.n_observed_dyads() as f64 - ties;
    let term = |count: f64, p: f64| if count == 0.0 { 0.0 } else { count * p.ln() };
    Ok(term(ties, theta) + term(non_ties, 1.0 - theta))
}
