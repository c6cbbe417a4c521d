//! Principal component analysis via covariance eigendecomposition.
//!
//! The eigensolver is a cyclic Jacobi rotation sweep: exact enough at the
//! matrix sizes we see (trace dimensions of a few hundred at most) and
//! fully deterministic.

use super::DiversityError;

/// Fitted PCA basis: mean, orthonormal components and their explained
/// variance, variance-sorted in non-increasing order.
#[derive(Debug, Clone)]
pub struct PcaModel {
    mean: Vec<f64>,
    /// One row per retained component.
    components: Vec<Vec<f64>>,
    explained_variance: Vec<f64>,
    total_variance: f64,
}

impl PcaModel {
    pub fn dims(&self) -> usize {
        self.mean.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn explained_variance(&self) -> &[f64] {
        &self.explained_variance
    }

    /// Fraction of total variance captured by the retained components.
    pub fn explained_fraction(&self) -> f64 {
        if self.total_variance > 0.0 {
            self.explained_variance.iter().sum::<f64>() / self.total_variance
        } else {
            1.0
        }
    }

    /// Projects a point onto the retained components.
    pub fn project(&self, point: &[f64]) -> Result<Vec<f64>, DiversityError> {
        if point.len() != self.dims() {
            return Err(DiversityError::DimensionMismatch {
                expected: self.dims(),
                got: point.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .zip(point)
                    .zip(&self.mean)
                    .map(|((c, p), m)| c * (p - m))
                    .sum()
            })
            .collect())
    }

    pub fn project_all(&self, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, DiversityError> {
        points.iter().map(|p| self.project(p)).collect()
    }
}

/// Hard cap on retained components, on top of the rank and variance rules.
pub const MAX_COMPONENTS: usize = 10;

/// Fits PCA, retaining the smallest number of components whose cumulative
/// explained variance reaches `variance_threshold`, capped at
/// `min(10, dims, points - 1)`. A threshold >= 1 retains the cap.
pub fn fit_pca(points: &[Vec<f64>], variance_threshold: f64) -> Result<PcaModel, DiversityError> {
    if points.len() < 2 {
        return Err(DiversityError::InsufficientData {
            needed: 2,
            got: points.len(),
        });
    }
    let dims = points[0].len();
    if dims == 0 || points.iter().any(|p| p.len() != dims) {
        return Err(DiversityError::DimensionMismatch {
            expected: dims,
            got: points.iter().map(|p| p.len()).find(|&w| w != dims).unwrap_or(0),
        });
    }

    let n = points.len() as f64;
    let mut mean = vec![0.0; dims];
    for p in points {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);

    // sample covariance (divides by n - 1)
    let mut cov = vec![vec![0.0; dims]; dims];
    for p in points {
        let centered: Vec<f64> = p.iter().zip(&mean).map(|(v, m)| v - m).collect();
        for i in 0..dims {
            for j in i..dims {
                cov[i][j] += centered[i] * centered[j];
            }
        }
    }
    let denom = n - 1.0;
    for i in 0..dims {
        for j in i..dims {
            cov[i][j] /= denom;
            cov[j][i] = cov[i][j];
        }
    }
    let total_variance: f64 = (0..dims).map(|i| cov[i][i]).sum();

    let (eigenvalues, eigenvectors) = jacobi_eigen(&mut cov);
    let mut order: Vec<usize> = (0..dims).collect();
    order.sort_by(|&a, &b| eigenvalues[b].partial_cmp(&eigenvalues[a]).unwrap());

    let cap = MAX_COMPONENTS.min(dims).min(points.len() - 1);
    let mut k = cap;
    if total_variance > 0.0 && variance_threshold < 1.0 {
        let mut cumulative = 0.0;
        for (rank, &idx) in order.iter().take(cap).enumerate() {
            cumulative += eigenvalues[idx].max(0.0);
            if cumulative / total_variance >= variance_threshold {
                k = rank + 1;
                break;
            }
        }
    }

    let components: Vec<Vec<f64>> = order[..k]
        .iter()
        .map(|&idx| eigenvectors.iter().map(|row| row[idx]).collect())
        .collect();
    let explained_variance: Vec<f64> = order[..k].iter().map(|&idx| eigenvalues[idx].max(0.0)).collect();

    Ok(PcaModel {
        mean,
        components,
        explained_variance,
        total_variance,
    })
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Returns (eigenvalues, eigenvector columns).
fn jacobi_eigen(a: &mut [Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off_diag: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off_diag += a[i][j] * a[i][j];
            }
        }
        if off_diag.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    (eigenvalues, v)
}
