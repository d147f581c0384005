//! Partition summaries of class-model output: co-membership probabilities,
//! a loss-minimizing point estimate, and the adjusted Rand index.

use crate::error::{Error, Result};

/// Fraction of label vectors in which each pair of actors shares a label.
/// Diagonal entries are 1.
pub fn co_membership<L: AsRef<[usize]>>(samples: &[L]) -> Result<Vec<Vec<f64>>> {
    let first = samples
        .first()
        .ok_or(Error::Empty("no samples for co-membership"))?;
    let n = first.as_ref().len();
    let mut counts = vec![vec![0usize; n]; n];
    for s in samples {
        let xi = s.as_ref();
        if xi.len() != n {
            return Err(Error::Dimension("label vectors of different lengths".into()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if xi[i] == xi[j] {
                    counts[i][j] += 1;
                }
            }
        }
    }
    let b = samples.len() as f64;
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        p[i][i] = 1.0;
        for j in (i + 1)..n {
            let v = counts[i][j] as f64 / b;
            p[i][j] = v;
            p[j][i] = v;
        }
    }
    Ok(p)
}

/// Expected pairwise misclassification loss of `labels`:
/// `Σ_{i<j} [same·(1 − p_ij)·c + diff·p_ij·(1 − c)]` with `c = rel_cost`.
pub fn partition_loss(p: &[Vec<f64>], labels: &[usize], rel_cost: f64) -> f64 {
    let n = labels.len();
    let mut loss = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            loss += if labels[i] == labels[j] {
                (1.0 - p[i][j]) * rel_cost
            } else {
                p[i][j] * (1.0 - rel_cost)
            };
        }
    }
    loss
}

fn validate(p: &[Vec<f64>], rel_cost: f64) -> Result<()> {
    if !(rel_cost > 0.0 && rel_cost < 1.0) {
        return Err(Error::invalid("relative cost must lie in (0, 1)"));
    }
    let n = p.len();
    for (i, row) in p.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Dimension("co-membership matrix is not square".into()));
        }
        for j in 0..i {
            if (row[j] - p[j][i]).abs() > 1e-9 {
                return Err(Error::invalid("co-membership matrix is not symmetric"));
            }
        }
    }
    Ok(())
}

/// Relabels to `0..m` in order of first appearance.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

/// Partitions visited by average-linkage agglomeration on `1 − p`, from all
/// singletons down to a single cluster.
fn average_linkage_path(p: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut path = Vec::with_capacity(n);
    let snapshot = |clusters: &[Vec<usize>]| {
        let mut labels = vec![0; n];
        for (c, members) in clusters.iter().enumerate() {
            for &i in members {
                labels[i] = c;
            }
        }
        labels
    };
    path.push(snapshot(&clusters));
    while clusters.len() > 1 {
        let mut best = (0, 1, f64::INFINITY);
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let mut d = 0.0;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        d += 1.0 - p[i][j];
                    }
                }
                d /= (clusters[a].len() * clusters[b].len()) as f64;
                if d < best.2 {
                    best = (a, b, d);
                }
            }
        }
        let merged = clusters.swap_remove(best.1);
        clusters[best.0].extend(merged);
        path.push(snapshot(&clusters));
    }
    path
}

/// Single-actor moves (to another cluster or a fresh singleton) and
/// whole-cluster merges until neither lowers the loss.
fn local_search(p: &[Vec<f64>], labels: &mut [usize], rel_cost: f64) {
    let n = labels.len();
    // pairing i with j in one cluster costs c − p_ij relative to splitting them
    let w = |i: usize, j: usize| rel_cost - p[i][j];
    loop {
        let mut improved = false;
        for i in 0..n {
            let n_labels = labels.iter().max().map_or(0, |m| m + 1);
            let mut score = vec![0.0; n_labels];
            let mut occupied = vec![false; n_labels];
            for j in 0..n {
                occupied[labels[j]] = true;
                if j != i {
                    score[labels[j]] += w(i, j);
                }
            }
            let current = score[labels[i]];
            let mut best = (labels[i], current);
            for c in 0..n_labels {
                if occupied[c] && c != labels[i] && score[c] < best.1 - 1e-12 {
                    best = (c, score[c]);
                }
            }
            let alone = labels.iter().filter(|&&l| l == labels[i]).count() == 1;
            if !alone && 0.0 < best.1 - 1e-12 {
                best = (n_labels, 0.0);
            }
            if best.0 != labels[i] {
                labels[i] = best.0;
                improved = true;
            }
        }
        let canon = canonical_labels(labels);
        labels.copy_from_slice(&canon);

        let m = labels.iter().max().map_or(0, |m| m + 1);
        let mut between = vec![vec![0.0; m]; m];
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (labels[i], labels[j]);
                if a != b {
                    between[a.min(b)][a.max(b)] += w(i, j);
                }
            }
        }
        let mut best = (0, 0, -1e-12);
        for a in 0..m {
            for b in (a + 1)..m {
                if between[a][b] < best.2 {
                    best = (a, b, between[a][b]);
                }
            }
        }
        if best.0 != best.1 {
            for l in labels.iter_mut() {
                if *l == best.1 {
                    *l = best.0;
                }
            }
            let canon = canonical_labels(labels);
            labels.copy_from_slice(&canon);
            improved = true;
        }
        if !improved {
            break;
        }
    }
}

/// Partition minimizing [`partition_loss`] for a co-membership matrix.
///
/// Every level of an average-linkage dendrogram on `1 − p` is scored, and
/// the best one is refined by local search. The number of clusters is an
/// output. Labels are 0-based in order of first appearance.
pub fn partition_point_estimate(p: &[Vec<f64>], rel_cost: f64) -> Result<Vec<usize>> {
    validate(p, rel_cost)?;
    if p.is_empty() {
        return Ok(Vec::new());
    }
    let mut candidates = average_linkage_path(p);
    let best_start = candidates
        .iter()
        .map(|l| partition_loss(p, l, rel_cost))
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut best = std::mem::take(&mut candidates[best_start]);
    local_search(p, &mut best, rel_cost);
    Ok(canonical_labels(&best))
}

/// Cluster sizes of a label vector, largest first.
pub fn cluster_sizes(labels: &[usize]) -> Vec<usize> {
    let canon = canonical_labels(labels);
    let m = canon.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0; m];
    for l in canon {
        sizes[l] += 1;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

fn choose2(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Adjusted Rand index between two labelings (1 for identical partitions).
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension("labelings of different lengths".into()));
    }
    let (a, b) = (canonical_labels(a), canonical_labels(b));
    let ma = a.iter().max().map_or(0, |m| m + 1);
    let mb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0usize; mb]; ma];
    for (&x, &y) in a.iter().zip(&b) {
        table[x][y] += 1;
    }
    let index: f64 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let rows: f64 = table.iter().map(|r| choose2(r.iter().sum())).sum();
    let cols: f64 = (0..mb)
        .map(|y| choose2(table.iter().map(|r| r[y]).sum()))
        .sum();
    let total = choose2(a.len());
    let expected = rows * cols / total;
    let max = 0.5 * (rows + cols);
    if (max - expected).abs() < f64::EPSILON {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}
