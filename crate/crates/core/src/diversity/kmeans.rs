//! Lloyd's K-means with greedy farthest-point initialization.

use rand::Rng;

use crate::rng::stream;

use super::DiversityError;

const MAX_ITERATIONS: usize = 300;

/// Fitted clustering: centroids, the assignment of every fitted point, and
/// the within-cluster sum of squares after each Lloyd iteration.
#[derive(Debug, Clone)]
pub struct ClusterModel {
    pub centroids: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub inertia: f64,
    pub inertia_trace: Vec<f64>,
}

impl ClusterModel {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    /// Index of the nearest centroid and its distance.
    pub fn nearest_centroid(&self, point: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, c) in self.centroids.iter().enumerate() {
            let d = euclidean(point, c);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    /// Number of clusters with at least one assigned point.
    pub fn non_empty_clusters(&self) -> usize {
        let mut seen = vec![false; self.k()];
        for &l in &self.labels {
            seen[l] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Runs Lloyd's iteration to an assignment fixpoint (or 300 iterations).
///
/// Initialization picks a seeded random first centroid, then greedily takes
/// the point farthest from its nearest chosen centroid. Deterministic given
/// the seed. Fails with [`DiversityError::InvalidK`] unless
/// `1 <= k <= points.len()`.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<ClusterModel, DiversityError> {
    if k == 0 || k > points.len() {
        return Err(DiversityError::InvalidK {
            k,
            points: points.len(),
        });
    }
    let mut rng = stream(seed, "kmeans-init", 0);

    // farthest-point initialization
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())].clone());
    while centroids.len() < k {
        let mut best = (0usize, -1.0f64);
        for (i, p) in points.iter().enumerate() {
            let nearest = centroids
                .iter()
                .map(|c| euclidean(p, c))
                .fold(f64::INFINITY, f64::min);
            if nearest > best.1 {
                best = (i, nearest);
            }
        }
        centroids.push(points[best.0].clone());
    }

    let mut labels = vec![0usize; points.len()];
    let mut inertia_trace = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        // assignment step
        let mut changed = false;
        let mut inertia = 0.0;
        for (p, label) in points.iter().zip(labels.iter_mut()) {
            let mut best = (0usize, f64::INFINITY);
            for (c_idx, c) in centroids.iter().enumerate() {
                let d = euclidean(p, c);
                if d < best.1 {
                    best = (c_idx, d);
                }
            }
            if best.0 != *label {
                changed = true;
            }
            *label = best.0;
            inertia += best.1 * best.1;
        }
        inertia_trace.push(inertia);
        if !changed && inertia_trace.len() > 1 {
            break;
        }

        // update step; empty clusters keep their previous centroid
        let dims = points[0].len();
        let mut sums = vec![vec![0.0; dims]; k];
        let mut counts = vec![0usize; k];
        for (p, &label) in points.iter().zip(&labels) {
            counts[label] += 1;
            for (s, v) in sums[label].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c_idx in 0..k {
            if counts[c_idx] > 0 {
                for (c, s) in centroids[c_idx].iter_mut().zip(&sums[c_idx]) {
                    *c = s / counts[c_idx] as f64;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let inertia = *inertia_trace.last().unwrap();
    Ok(ClusterModel {
        centroids,
        labels,
        inertia,
        inertia_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn separated_pairs_find_both_centroids() {
        let points = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![10.0, 0.0],
            vec![10.0, 1.0],
        ];
        let model = kmeans(&points, 2, 0).unwrap();
        let mut centroids = model.centroids.clone();
        centroids.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        assert_eq!(centroids[0], vec![0.0, 0.5]);
        assert_eq!(centroids[1], vec![10.0, 0.5]);
        assert_eq!(model.labels[0], model.labels[1]);
        assert_eq!(model.labels[2], model.labels[3]);
        assert_ne!(model.labels[0], model.labels[2]);
    }

    #[test]
    fn k_one_returns_the_mean() {
        let points = vec![vec![1.0, 3.0], vec![3.0, 5.0], vec![5.0, 1.0]];
        let model = kmeans(&points, 1, 7).unwrap();
        assert_eq!(model.centroids, vec![vec![3.0, 3.0]]);
    }

    #[test]
    fn invalid_k_is_rejected() {
        let points = vec![vec![0.0], vec![1.0]];
        assert!(matches!(kmeans(&points, 0, 0), Err(DiversityError::InvalidK { .. })));
        assert!(matches!(kmeans(&points, 3, 0), Err(DiversityError::InvalidK { .. })));
    }

    #[test]
    fn inertia_trace_is_non_increasing_and_recomputable() {
        let mut rng = crate::rng::stream(5, "kmdata", 0);
        let points: Vec<Vec<f64>> = (0..60)
            .map(|_| (0..3).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        for seed in 0..5 {
            let model = kmeans(&points, 4, seed).unwrap();
            for pair in model.inertia_trace.windows(2) {
                assert!(pair[1] <= pair[0] + 1e-9, "inertia rose: {pair:?}");
            }
            // final inertia matches an independent recomputation, and every
            // point sits with its nearest centroid
            let mut recomputed = 0.0;
            for (p, &label) in points.iter().zip(&model.labels) {
                let (nearest, d) = model.nearest_centroid(p);
                let dl = euclidean(p, &model.centroids[label]);
                assert!(dl <= d + 1e-12, "label {label} is not nearest ({nearest})");
                recomputed += dl * dl;
            }
            assert!((recomputed - model.inertia).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let points: Vec<Vec<f64>> = (0..20).map(|i| vec![(i % 7) as f64, (i % 3) as f64]).collect();
        let a = kmeans(&points, 3, 42).unwrap();
        let b = kmeans(&points, 3, 42).unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.centroids, b.centroids);
    }
}
