//! Input-diversity scores against the archive, plus the PCA and K-means
//! primitives shared with the post-execution analysis.

mod kmeans;
mod pca;

pub use kmeans::{kmeans, ClusterModel};
pub use pca::{fit_pca, PcaModel, MAX_COMPONENTS};

use thiserror::Error;

use crate::scenario::EncodedVector;

/// Diversity score ceiling; also the score of a candidate measured against
/// an empty archive, so the first selected scenario is chosen purely by
/// failure likelihood.
pub const DIVERSITY_MAX: f64 = 20.0;

/// Cumulative-variance threshold for the search-time PCA fit.
pub const PCA_VARIANCE_THRESHOLD: f64 = 0.95;

/// Archive size below which the PCA metric falls back to plain mean
/// distance.
pub const PCA_MIN_ARCHIVE: usize = 4;

/// K used for search-time clustering of the projected archive.
pub fn search_cluster_k(archive_len: usize) -> usize {
    archive_len.min(5)
}

#[derive(Debug, Error)]
pub enum DiversityError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("invalid k: {k} for {points} points")]
    InvalidK { k: usize, points: usize },
}

fn check_widths(candidate: &[f64], archive: &[EncodedVector]) -> Result<(), DiversityError> {
    for entry in archive {
        if entry.len() != candidate.len() {
            return Err(DiversityError::DimensionMismatch {
                expected: candidate.len(),
                got: entry.len(),
            });
        }
    }
    Ok(())
}

/// Mean Euclidean distance from the candidate to every archive member.
/// An empty archive scores [`DIVERSITY_MAX`].
pub fn euclidean_diversity(
    candidate: &EncodedVector,
    archive: &[EncodedVector],
) -> Result<f64, DiversityError> {
    check_widths(candidate, archive)?;
    if archive.is_empty() {
        return Ok(DIVERSITY_MAX);
    }
    let total: f64 = archive
        .iter()
        .map(|entry| kmeans::euclidean(candidate, entry))
        .sum();
    Ok(total / archive.len() as f64)
}

/// The PCA/K-means model for one evaluation batch: fit once per generation,
/// then scored per candidate.
#[derive(Debug, Clone)]
pub struct PcaClusterMetric {
    pca: PcaModel,
    clusters: ClusterModel,
}

impl PcaClusterMetric {
    /// Fits PCA (0.95 variance) on the archive and clusters the projected
    /// archive with `k = min(5, |archive|)`. Returns `None` when the
    /// archive is too small, in which case callers fall back to
    /// [`euclidean_diversity`].
    pub fn fit(archive: &[EncodedVector], seed: u64) -> Result<Option<Self>, DiversityError> {
        if archive.len() < PCA_MIN_ARCHIVE {
            return Ok(None);
        }
        let pca = fit_pca(archive, PCA_VARIANCE_THRESHOLD)?;
        let projected = pca.project_all(archive)?;
        let clusters = kmeans(&projected, search_cluster_k(archive.len()), seed)?;
        Ok(Some(PcaClusterMetric { pca, clusters }))
    }

    /// Distance from the projected candidate to the nearest centroid.
    pub fn score(&self, candidate: &EncodedVector) -> Result<f64, DiversityError> {
        let projected = self.pca.project(candidate)?;
        Ok(self.clusters.nearest_centroid(&projected).1)
    }
}

/// Distance to the nearest archive cluster centroid in PCA space, falling
/// back to [`euclidean_diversity`] for archives smaller than 4.
pub fn pca_cluster_diversity(
    candidate: &EncodedVector,
    archive: &[EncodedVector],
    seed: u64,
) -> Result<f64, DiversityError> {
    check_widths(candidate, archive)?;
    match PcaClusterMetric::fit(archive, seed)? {
        Some(metric) => metric.score(candidate),
        None => euclidean_diversity(candidate, archive),
    }
}
