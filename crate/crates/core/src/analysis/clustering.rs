//! Failure-type counting: PCA projection, K-means, and silhouette-guided
//! selection of the cluster count.

use rand_chacha::rand_core::RngCore;

use crate::diversity::{fit_pca, kmeans, PCA_VARIANCE_THRESHOLD};
use crate::rng::stream;
use crate::scenario::{encode, FeatureSchema};

use super::{flatten_traces, ExecutionRecord};

/// Upper bound on the cluster count explored by silhouette analysis.
pub const SILHOUETTE_K_MAX: usize = 10;

/// Relative improvement required to accept a larger K: the silhouette must
/// grow by at least 20%.
pub const SILHOUETTE_IMPROVEMENT: f64 = 1.2;

/// Outcome of the K selection: the chosen count, per-point labels, and the
/// silhouette observed at each K that was evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub k_star: usize,
    pub labels: Vec<usize>,
    pub silhouette_by_k: Vec<(usize, f64)>,
}

impl ClusteringResult {
    fn degenerate(n: usize) -> Self {
        ClusteringResult {
            k_star: 1,
            labels: vec![0; n],
            silhouette_by_k: Vec::new(),
        }
    }

    pub fn non_empty_clusters(&self) -> usize {
        if self.labels.is_empty() {
            return 0;
        }
        let mut seen = vec![false; self.k_star];
        for &l in &self.labels {
            seen[l] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }
}

/// Mean silhouette coefficient of a labelled point set. Single-member
/// clusters contribute 0 for their point.
pub fn silhouette_score(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    assert_eq!(points.len(), labels.len());
    let n = points.len();
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut counts = vec![0usize; k];
    for &l in labels {
        counts[l] += 1;
    }

    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };

    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i];
        if counts[own] <= 1 {
            continue; // s(i) = 0
        }
        let mut sums = vec![0.0f64; k];
        for j in 0..n {
            if i != j {
                sums[labels[j]] += dist(&points[i], &points[j]);
            }
        }
        let a = sums[own] / (counts[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && counts[c] > 0)
            .map(|c| sums[c] / counts[c] as f64)
            .fold(f64::INFINITY, f64::min);
        if !b.is_finite() {
            continue;
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

/// Picks the cluster count by silhouette analysis: start at K=2 and accept
/// K+1 only while the silhouette improves by at least 20%, stopping at the
/// first rejection. Fewer than 3 points or fewer than 2 distinct rows give
/// K*=1 outright.
pub fn choose_k_by_silhouette(points: &[Vec<f64>], k_max: usize, seed: u64) -> ClusteringResult {
    let n = points.len();
    let distinct = count_distinct(points);
    if n < 3 || distinct < 2 {
        return ClusteringResult::degenerate(n);
    }

    let k_cap = k_max.min(n).min(distinct.max(2));
    let fit = |k: usize| {
        let sub_seed = stream(seed, "choose-k", k as u64).next_u64();
        kmeans(points, k, sub_seed).expect("k <= points checked")
    };

    let mut silhouette_by_k = Vec::new();
    let mut current = fit(2);
    let mut current_score = silhouette_score(points, &current.labels);
    let mut k_star = 2;
    silhouette_by_k.push((2, current_score));

    for k in 3..=k_cap {
        let candidate = fit(k);
        let score = silhouette_score(points, &candidate.labels);
        silhouette_by_k.push((k, score));
        if score >= SILHOUETTE_IMPROVEMENT * current_score {
            current = candidate;
            current_score = score;
            k_star = k;
        } else {
            break;
        }
    }

    ClusteringResult {
        k_star,
        labels: current.labels,
        silhouette_by_k,
    }
}

fn count_distinct(points: &[Vec<f64>]) -> usize {
    let mut distinct: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        if !distinct.iter().any(|q| *q == p) {
            distinct.push(p);
        }
    }
    distinct.len()
}

/// PCA projection (0.95 variance) followed by silhouette-guided K-means.
fn cluster_rows(rows: &[Vec<f64>], seed: u64) -> ClusteringResult {
    match rows.len() {
        0 => ClusteringResult {
            k_star: 1,
            labels: Vec::new(),
            silhouette_by_k: Vec::new(),
        },
        1 => ClusteringResult::degenerate(1),
        _ => {
            let projected = match fit_pca(rows, PCA_VARIANCE_THRESHOLD) {
                Ok(pca) => pca.project_all(rows).expect("projection width matches"),
                Err(_) => rows.to_vec(),
            };
            choose_k_by_silhouette(&projected, SILHOUETTE_K_MAX, seed)
        }
    }
}

/// Number of distinct failure types: non-empty clusters over the failing
/// execution traces. Zero when nothing failed.
pub fn unique_failures(records: &[ExecutionRecord], seed: u64) -> usize {
    output_diversity_metrics(records, seed).0
}

/// (unique failure clusters, output entropy %) over failing traces.
pub fn output_diversity_metrics(records: &[ExecutionRecord], seed: u64) -> (usize, f64) {
    let failing: Vec<ExecutionRecord> = records.iter().filter(|r| r.failed).cloned().collect();
    if failing.is_empty() {
        return (0, 0.0);
    }
    let rows = flatten_traces(&failing).expect("failing set is non-empty");
    let clustering = cluster_rows(&rows, seed);
    let entropy = super::entropy_percent(&clustering.labels).unwrap_or(0.0);
    (clustering.non_empty_clusters(), entropy)
}

/// (unique input clusters, input entropy %) over the encoded failing
/// configurations.
pub fn input_diversity_metrics(
    records: &[ExecutionRecord],
    schema: &FeatureSchema,
    seed: u64,
) -> (usize, f64) {
    let rows: Vec<Vec<f64>> = records
        .iter()
        .filter(|r| r.failed)
        .map(|r| encode(&r.config, schema).expect("archived configs are schema-valid"))
        .collect();
    if rows.is_empty() {
        return (0, 0.0);
    }
    let clustering = cluster_rows(&rows, seed);
    let entropy = super::entropy_percent(&clustering.labels).unwrap_or(0.0);
    (clustering.non_empty_clusters(), entropy)
}
