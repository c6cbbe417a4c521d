//! Trace normalization for clustering.

use super::{AnalysisError, ExecutionRecord, Trajectory};

/// Flattens each record's trajectory to a row, zero-padded to the longest
/// trajectory. Planar positions interleave as x0, y0, x1, y1, ...; scalar
/// trajectories keep their sample order. Row order follows `records`.
pub fn flatten_traces(records: &[ExecutionRecord]) -> Result<Vec<Vec<f64>>, AnalysisError> {
    if records.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let width = records
        .iter()
        .map(|r| match &r.trajectory {
            Trajectory::Planar(points) => points.len() * 2,
            Trajectory::Scalar(samples) => samples.len(),
        })
        .max()
        .unwrap_or(0);
    let rows = records
        .iter()
        .map(|r| {
            let mut row = Vec::with_capacity(width);
            match &r.trajectory {
                Trajectory::Planar(points) => {
                    for p in points {
                        row.push(p[0]);
                        row.push(p[1]);
                    }
                }
                Trajectory::Scalar(samples) => row.extend_from_slice(samples),
            }
            row.resize(width, 0.0);
            row
        })
        .collect();
    Ok(rows)
}
