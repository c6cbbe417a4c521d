//! Post-execution evaluation: failure clustering, diversity entropy,
//! time-to-failure and the statistical comparison machinery.

mod clustering;
mod entropy;
mod stats;
mod traces;

pub use clustering::{
    choose_k_by_silhouette, input_diversity_metrics, output_diversity_metrics, silhouette_score,
    unique_failures, ClusteringResult, SILHOUETTE_IMPROVEMENT, SILHOUETTE_K_MAX,
};
pub use entropy::entropy_percent;
pub use stats::{median, quartile_range, vargha_delaney_a12, wilcoxon_rank_sum};
pub use traces::flatten_traces;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::ScenarioConfig;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("empty input")]
    EmptyInput,
    #[error("sample too small: need at least {needed}, got {got}")]
    SampleTooSmall { needed: usize, got: usize },
}

/// Recorded agent motion during one scenario execution: planar positions
/// for driving-style environments, scalar height samples for walkers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trajectory {
    Planar(Vec<[f64; 2]>),
    Scalar(Vec<f64>),
}

impl Trajectory {
    pub fn len(&self) -> usize {
        match self {
            Trajectory::Planar(points) => points.len(),
            Trajectory::Scalar(samples) => samples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One executed scenario with its oracle verdict and budget counters.
///
/// `wall_clock` is virtual simulation time (steps times a fixed step
/// duration), cumulative over the execution order, so outputs stay
/// byte-identical across replays.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionRecord {
    pub config: ScenarioConfig,
    pub failed: bool,
    pub trajectory: Trajectory,
    /// Surrogate evaluations consumed when this scenario was selected (or
    /// the execution ordinal when no search preceded it).
    pub evaluations: u64,
    /// Cumulative virtual seconds of simulation up to and including this
    /// execution.
    pub wall_clock: f64,
}

/// Budget consumed until the first real failure. Absent when no executed
/// scenario failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeToFailure {
    pub evaluations: u64,
    pub wall_clock: f64,
}

/// Counters of the first failing record, in execution order; `None` is the
/// no-failure sentinel.
pub fn time_to_first_failure(records: &[ExecutionRecord]) -> Option<TimeToFailure> {
    records.iter().find(|r| r.failed).map(|r| TimeToFailure {
        evaluations: r.evaluations,
        wall_clock: r.wall_clock,
    })
}
