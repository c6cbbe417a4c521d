//! Restart-based multi-objective scenario search with hypervolume
//! stagnation, plus the single-objective GA baseline.

mod baseline;
mod hypervolume;
mod knee;
mod runner;

pub use baseline::run_baseline_ga;
pub use hypervolume::{detect_stagnation, hypervolume_2d};
pub use knee::{knee_point, select_representative, SelectionStrategy};
pub use runner::run_search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diversity::{DiversityError, DIVERSITY_MAX};
use crate::moea::{MoeaAlgorithm, MutationParams};
use crate::scenario::{
    config_from_json, config_to_json, FeatureSchema, ScenarioConfig, ScenarioError,
};
use crate::surrogate::SurrogateError;

/// Which diversity objective the search optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiversityMetric {
    Euclidean,
    Pca,
}

impl std::fmt::Display for DiversityMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiversityMetric::Euclidean => write!(f, "euclidean"),
            DiversityMetric::Pca => write!(f, "pca"),
        }
    }
}

/// Full search configuration. Defaults carry the standard experiment
/// settings: 50 generations, population 50, crossover rate 0.75,
/// stagnation tol 5e-6 over a 10-generation window, reference point
/// (1.2, 20.2).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Test runs, i.e. the archive budget.
    pub total_runs: usize,
    /// Max generations per run.
    pub generations: usize,
    pub population_size: usize,
    pub crossover_rate: f64,
    pub stagnation_tol: f64,
    /// Stagnation window in generations.
    pub stagnation_window: usize,
    /// Hypervolume reference point, componentwise above the feasible box.
    pub reference: [f64; 2],
    pub algorithm: MoeaAlgorithm,
    pub diversity: DiversityMetric,
    pub selection: SelectionStrategy,
    #[serde(default)]
    pub mutation: MutationParams,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            total_runs: 10,
            generations: 50,
            population_size: 50,
            crossover_rate: 0.75,
            stagnation_tol: 5e-6,
            stagnation_window: 10,
            reference: [1.2, 20.2],
            algorithm: MoeaAlgorithm::AgeMoea,
            diversity: DiversityMetric::Euclidean,
            selection: SelectionStrategy::Knee,
            mutation: MutationParams::default(),
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.total_runs < 1 || self.generations < 1 || self.population_size < 1 {
            return Err(SearchError::InvalidConfig(
                "total_runs, generations and population_size must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(SearchError::InvalidConfig(
                "crossover_rate must be in [0, 1]".into(),
            ));
        }
        if self.stagnation_tol <= 0.0 {
            return Err(SearchError::InvalidConfig("stagnation_tol must be positive".into()));
        }
        if self.stagnation_window < 1 {
            return Err(SearchError::InvalidConfig(
                "stagnation_window must be at least 1".into(),
            ));
        }
        if self.reference[0] <= 1.0 || self.reference[1] <= DIVERSITY_MAX {
            return Err(SearchError::InvalidConfig(format!(
                "reference point {:?} must strictly exceed (1, {DIVERSITY_MAX})",
                self.reference
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation.breadth) || self.mutation.eta <= 0.0 {
            return Err(SearchError::InvalidConfig("invalid mutation parameters".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("seed set is empty: the search needs failing training configs")]
    EmptySeedSet,
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Surrogate(#[from] SurrogateError),
    #[error(transparent)]
    Diversity(#[from] DiversityError),
}

/// Maps the maximized quantities (failure probability, diversity score)
/// onto the minimized objective pair (f1, f2). The feasible box becomes
/// [0,1] x [0,20], strictly dominated by the (1.2, 20.2) reference point.
pub fn objective_transform(s_value: f64, div_value: f64) -> [f64; 2] {
    [
        1.0 - s_value,
        DIVERSITY_MAX - div_value.clamp(0.0, DIVERSITY_MAX),
    ]
}

/// One archived scenario with its selection context.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub config: ScenarioConfig,
    pub predicted_failure: f64,
    /// Diversity score at selection time (search-metric units).
    pub diversity: f64,
    pub run: usize,
    pub generation: usize,
    /// Cumulative surrogate evaluations when this entry was selected.
    pub evaluations: u64,
}

/// Ordered, append-only set of selected scenarios.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Archive {
    pub entries: Vec<ArchiveEntry>,
}

impl Archive {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// JSON-lines form, one entry per line.
    pub fn to_jsonl(&self, schema: &FeatureSchema) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            let line = serde_json::json!({
                "config": config_to_json(&entry.config, schema),
                "predicted_failure": entry.predicted_failure,
                "diversity": entry.diversity,
                "run": entry.run,
                "generation": entry.generation,
                "evaluations": entry.evaluations,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str, schema: &FeatureSchema) -> Result<Self, SearchError> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value =
                serde_json::from_str(line).map_err(|e| ScenarioError::ParseError {
                    key: format!("<archive line {}>", lineno + 1),
                    reason: e.to_string(),
                })?;
            let field = |name: &str| {
                value.get(name).and_then(|v| v.as_f64()).ok_or_else(|| {
                    ScenarioError::ParseError {
                        key: name.into(),
                        reason: format!("missing or non-numeric on archive line {}", lineno + 1),
                    }
                })
            };
            let config_value = value.get("config").ok_or_else(|| ScenarioError::ParseError {
                key: "config".into(),
                reason: format!("missing on archive line {}", lineno + 1),
            })?;
            entries.push(ArchiveEntry {
                config: config_from_json(config_value, schema)?,
                predicted_failure: field("predicted_failure")?,
                diversity: field("diversity")?,
                run: field("run")? as usize,
                generation: field("generation")? as usize,
                evaluations: field("evaluations")? as u64,
            });
        }
        Ok(Archive { entries })
    }
}

/// One per-generation log record. For the single-objective baseline the
/// `hypervolume` column carries the monitored best fitness instead.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub run: usize,
    pub generation: usize,
    pub hypervolume: f64,
    pub evaluations: u64,
    pub archive_size: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchLog {
    pub rows: Vec<LogRow>,
}

impl SearchLog {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("run,generation,hypervolume,evaluations,archive_size\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.run, row.generation, row.hypervolume, row.evaluations, row.archive_size
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, SearchError> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if lineno == 0 || line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(SearchError::InvalidConfig(format!(
                    "log line {}: expected 5 fields",
                    lineno + 1
                )));
            }
            let parse_err = |what: &str| {
                SearchError::InvalidConfig(format!("log line {}: bad {what}", lineno + 1))
            };
            rows.push(LogRow {
                run: fields[0].parse().map_err(|_| parse_err("run"))?,
                generation: fields[1].parse().map_err(|_| parse_err("generation"))?,
                hypervolume: fields[2].parse().map_err(|_| parse_err("hypervolume"))?,
                evaluations: fields[3].parse().map_err(|_| parse_err("evaluations"))?,
                archive_size: fields[4].parse().map_err(|_| parse_err("archive_size"))?,
            });
        }
        Ok(SearchLog { rows })
    }
}

/// Search output: the archive plus the per-generation log.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub archive: Archive,
    pub log: SearchLog,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_maps_the_corners() {
        assert_eq!(objective_transform(1.0, 20.0), [0.0, 0.0]);
        assert_eq!(objective_transform(0.0, 0.0), [1.0, 20.0]);
        assert_eq!(objective_transform(0.7, 5.0), [0.30000000000000004, 15.0]);
    }

    #[test]
    fn transform_clamps_diversity() {
        assert_eq!(objective_transform(0.5, 25.0), [0.5, 0.0]);
        assert_eq!(objective_transform(0.5, -1.0), [0.5, 20.0]);
    }

    #[test]
    fn transform_is_order_reversing_in_s() {
        // strictly larger s gives strictly smaller f1
        let coarse: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        for pair in coarse.windows(2) {
            let lo = objective_transform(pair[0], 5.0);
            let hi = objective_transform(pair[1], 5.0);
            assert!(hi[0] < lo[0]);
        }
    }

    #[test]
    fn config_validation_catches_bad_fields() {
        let mut cfg = SearchConfig::default();
        cfg.crossover_rate = 1.5;
        assert!(cfg.validate().is_err());
        let mut cfg = SearchConfig::default();
        cfg.reference = [0.9, 20.2];
        assert!(cfg.validate().is_err());
        let mut cfg = SearchConfig::default();
        cfg.total_runs = 0;
        assert!(cfg.validate().is_err());
        assert!(SearchConfig::default().validate().is_ok());
    }

    #[test]
    fn log_csv_round_trips() {
        let log = SearchLog {
            rows: vec![
                LogRow {
                    run: 0,
                    generation: 0,
                    hypervolume: 12.25,
                    evaluations: 50,
                    archive_size: 0,
                },
                LogRow {
                    run: 1,
                    generation: 3,
                    hypervolume: 19.5,
                    evaluations: 400,
                    archive_size: 1,
                },
            ],
        };
        assert_eq!(SearchLog::from_csv(&log.to_csv()).unwrap(), log);
    }

    #[test]
    fn archive_jsonl_round_trips() {
        use crate::testutil::{parking_like_schema, random_parking_config};
        let schema = parking_like_schema();
        let archive = Archive {
            entries: (0..3)
                .map(|i| ArchiveEntry {
                    config: random_parking_config(&schema, i, 7),
                    predicted_failure: 0.5 + i as f64 / 10.0,
                    diversity: i as f64,
                    run: i as usize,
                    generation: 10 + i as usize,
                    evaluations: 100 * (i + 1),
                })
                .collect(),
        };
        let text = archive.to_jsonl(&schema);
        assert_eq!(Archive::from_jsonl(&text, &schema).unwrap(), archive);
    }
}
