use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::rng::{substream, LABEL_KMEANS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            k: 4,
            seed: 0,
            max_iter: 300,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult<const D: usize> {
    pub centroids: Vec<[f64; D]>,
    pub assignments: Vec<usize>,
    pub inertia: f64,
    /// Inertia after the initial assignment and after every accepted update.
    pub inertia_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl<const D: usize> ClusterResult<D> {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.centroids.len()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }
}

fn dist2<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest<const D: usize>(p: &[f64; D], centroids: &[[f64; D]]) -> (usize, f64) {
    let mut best = (0, dist2(p, &centroids[0]));
    for (j, c) in centroids.iter().enumerate().skip(1) {
        let d = dist2(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn assign<const D: usize>(points: &[[f64; D]], centroids: &[[f64; D]]) -> (Vec<usize>, Vec<f64>, f64) {
    let (labels, dists): (Vec<usize>, Vec<f64>) =
        points.par_iter().map(|p| nearest(p, centroids)).unzip();
    let inertia = dists.iter().sum();
    (labels, dists, inertia)
}

fn plus_plus<const D: usize>(points: &[[f64; D]], k: usize, seed: u64) -> Vec<[f64; D]> {
    let mut rng = substream(seed, LABEL_KMEANS);
    let mut centroids = vec![points[rng.random_range(0..points.len())]];
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            d2.iter()
                .position(|&d| {
                    acc += d;
                    acc > target
                })
                .unwrap_or_else(|| d2.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            rng.random_range(0..points.len())
        };
        let c = points[pick];
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(dist2(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

/// k-means++ seeding followed by Lloyd iterations. Empty clusters move to
/// the point farthest from its centroid. Iteration stops once no centroid
/// moves by `tol` or more, or when an update would raise the inertia.
pub fn kmeans<const D: usize>(points: &[[f64; D]], config: &KMeansConfig) -> Result<ClusterResult<D>, AnalysisError> {
    let k = config.k;
    if k == 0 || k > points.len() {
        return Err(AnalysisError::ClusterCount {
            k,
            points: points.len(),
        });
    }
    if let Some(index) = points.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
        return Err(AnalysisError::NonFinite {
            what: "k-means",
            index,
        });
    }
    let mut centroids = plus_plus(points, k, config.seed);
    let (mut labels, mut dists, mut inertia) = assign(points, &centroids);
    let mut history = vec![inertia];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iter {
        let mut sums = vec![[0.0; D]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(p) {
                *s += x;
            }
        }
        let mut next = centroids.clone();
        let mut taken: Vec<usize> = Vec::new();
        for j in 0..k {
            if counts[j] > 0 {
                next[j] = sums[j].map(|s| s / counts[j] as f64);
                continue;
            }
            let far = (0..points.len())
                .filter(|i| !taken.contains(i))
                .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)))
                .unwrap_or(0);
            taken.push(far);
            next[j] = points[far];
        }

        let (l2, d2, i2) = assign(points, &next);
        if i2 > inertia {
            converged = true;
            break;
        }
        let shift = centroids
            .iter()
            .zip(&next)
            .map(|(a, b)| dist2(a, b).sqrt())
            .fold(0.0, f64::max);
        iterations += 1;
        centroids = next;
        labels = l2;
        dists = d2;
        inertia = i2;
        history.push(inertia);
        if shift < config.tol {
            converged = true;
            break;
        }
    }

    Ok(ClusterResult {
        centroids,
        assignments: labels,
        inertia,
        inertia_history: history,
        iterations,
        converged,
    })
}

/// Share of points whose cluster's majority truth label matches their own.
pub fn purity(assignments: &[usize], truth: &[u32]) -> f64 {
    if assignments.is_empty() {
        return 0.0;
    }
    let mut table: std::collections::BTreeMap<(usize, u32), usize> = Default::default();
    for (&a, &t) in assignments.iter().zip(truth) {
        *table.entry((a, t)).or_default() += 1;
    }
    let mut best: std::collections::BTreeMap<usize, usize> = Default::default();
    for ((a, _), n) in table {
        let e = best.entry(a).or_default();
        *e = (*e).max(n);
    }
    best.values().sum::<usize>() as f64 / assignments.len() as f64
}
