//! Campaign harness: (approach x seed) cells of the full pipeline, with
//! aggregated medians and pairwise statistics.

use std::collections::BTreeMap;

use rand_chacha::rand_core::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{
    input_diversity_metrics, median, output_diversity_metrics, quartile_range,
    time_to_first_failure, vargha_delaney_a12, wilcoxon_rank_sum, AnalysisError, TimeToFailure,
};
use crate::moea::{MoeaAlgorithm, MutationParams};
use crate::rng::stream;
use crate::scenario::ScenarioError;
use crate::search::{
    run_baseline_ga, run_search, DiversityMetric, SearchConfig, SearchError, SelectionStrategy,
};
use crate::surrogate::{train, SurrogateError, TrainParams};

use super::data::{execute_archive, generate_training_log};
use super::EnvKind;

/// How one approach searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SearchMethod {
    /// Single-objective GA on predicted failure probability.
    BaselineGa,
    Moea {
        algorithm: MoeaAlgorithm,
        diversity: DiversityMetric,
        selection: SelectionStrategy,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachSpec {
    pub name: String,
    #[serde(flatten)]
    pub method: SearchMethod,
}

/// Search budget shared by every approach in a campaign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub total_runs: usize,
    pub generations: usize,
    pub population_size: usize,
    pub crossover_rate: f64,
    pub stagnation_tol: f64,
    pub stagnation_window: usize,
}

impl Default for BudgetSpec {
    fn default() -> Self {
        let cfg = SearchConfig::default();
        BudgetSpec {
            // archive budget sized so realized failure counts separate the
            // approaches; the per-run settings keep the standard values
            total_runs: 50,
            generations: cfg.generations,
            population_size: cfg.population_size,
            crossover_rate: cfg.crossover_rate,
            stagnation_tol: cfg.stagnation_tol,
            stagnation_window: cfg.stagnation_window,
        }
    }
}

/// Per-seed surrogate training setup.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainingSpec {
    pub samples: usize,
    pub hidden_sizes: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for TrainingSpec {
    fn default() -> Self {
        let params = TrainParams::default();
        TrainingSpec {
            samples: 4000,
            hidden_sizes: params.hidden_sizes,
            learning_rate: params.learning_rate,
            epochs: 60,
            batch_size: params.batch_size,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignPlan {
    pub env: EnvKind,
    pub approaches: Vec<ApproachSpec>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub budget: BudgetSpec,
    #[serde(default)]
    pub training: TrainingSpec,
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid campaign plan: {0}")]
    InvalidPlan(String),
    #[error("seed {seed}: training log contains no failures; increase training.samples")]
    NoTrainingFailures { seed: u64 },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Surrogate(#[from] SurrogateError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// One campaign cell: metrics for (approach, seed).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignRow {
    pub approach: String,
    pub seed: u64,
    pub total_failures: usize,
    pub unique_failures: usize,
    pub input_clusters: usize,
    pub input_entropy: f64,
    pub output_entropy: f64,
    pub ttf: Option<TimeToFailure>,
    pub archive_size: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricSummary {
    pub median: f64,
    pub iqr: f64,
    /// Seeds lacking the metric (e.g. no failure found for TTF).
    pub missing: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Comparison {
    pub approach_a: String,
    pub approach_b: String,
    pub metric: String,
    /// Two-sided Wilcoxon rank-sum p-value; absent when either sample is
    /// too small.
    pub p_value: Option<f64>,
    pub a12: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignReport {
    pub rows: Vec<CampaignRow>,
    /// approach -> metric -> summary.
    pub summaries: BTreeMap<String, BTreeMap<String, MetricSummary>>,
    pub comparisons: Vec<Comparison>,
}

pub const METRICS: [&str; 7] = [
    "total_failures",
    "unique_failures",
    "input_clusters",
    "input_entropy",
    "output_entropy",
    "ttf_evaluations",
    "ttf_wall_clock",
];

fn metric_value(row: &CampaignRow, metric: &str) -> Option<f64> {
    match metric {
        "total_failures" => Some(row.total_failures as f64),
        "unique_failures" => Some(row.unique_failures as f64),
        "input_clusters" => Some(row.input_clusters as f64),
        "input_entropy" => Some(row.input_entropy),
        "output_entropy" => Some(row.output_entropy),
        "ttf_evaluations" => row.ttf.map(|t| t.evaluations as f64),
        "ttf_wall_clock" => row.ttf.map(|t| t.wall_clock),
        _ => None,
    }
}

impl CampaignPlan {
    pub fn validate(&self) -> Result<(), CampaignError> {
        if self.approaches.len() < 2 {
            return Err(CampaignError::InvalidPlan(
                "approaches: need at least 2".into(),
            ));
        }
        if self.seeds.len() < 2 {
            return Err(CampaignError::InvalidPlan("seeds: need at least 2".into()));
        }
        for (i, a) in self.approaches.iter().enumerate() {
            if a.name.trim().is_empty() {
                return Err(CampaignError::InvalidPlan(format!(
                    "approaches[{i}].name: must be non-empty"
                )));
            }
            if self.approaches[..i].iter().any(|b| b.name == a.name) {
                return Err(CampaignError::InvalidPlan(format!(
                    "approaches[{i}].name: duplicate '{}'",
                    a.name
                )));
            }
        }
        if self.training.samples < 1 {
            return Err(CampaignError::InvalidPlan(
                "training.samples: must be at least 1".into(),
            ));
        }
        self.search_config(&self.approaches[0], 0).validate()?;
        Ok(())
    }

    fn search_config(&self, approach: &ApproachSpec, seed: u64) -> SearchConfig {
        let base = SearchConfig {
            total_runs: self.budget.total_runs,
            generations: self.budget.generations,
            population_size: self.budget.population_size,
            crossover_rate: self.budget.crossover_rate,
            stagnation_tol: self.budget.stagnation_tol,
            stagnation_window: self.budget.stagnation_window,
            mutation: MutationParams::default(),
            seed,
            ..SearchConfig::default()
        };
        match approach.method {
            SearchMethod::BaselineGa => base,
            SearchMethod::Moea {
                algorithm,
                diversity,
                selection,
            } => SearchConfig {
                algorithm,
                diversity,
                selection,
                ..base
            },
        }
    }
}

/// Runs every (approach, seed) cell: fresh training log, surrogate
/// training, search, execution, metrics; then aggregates summaries and
/// pairwise statistics. Fully deterministic given the plan.
pub fn run_campaign(plan: &CampaignPlan) -> Result<CampaignReport, CampaignError> {
    plan.validate()?;
    let env = plan.env.build();
    let schema = env.schema();

    let mut rows = Vec::with_capacity(plan.approaches.len() * plan.seeds.len());
    for &seed in &plan.seeds {
        // the training log and surrogate depend only on the seed, so every
        // approach at this seed searches the same model
        let log = generate_training_log(&env, plan.training.samples, derived(seed, "data"));
        let failing = log.failing_configs();
        if failing.is_empty() {
            return Err(CampaignError::NoTrainingFailures { seed });
        }
        let training_set = log.to_training_set(schema)?;
        let train_params = TrainParams {
            hidden_sizes: plan.training.hidden_sizes.clone(),
            learning_rate: plan.training.learning_rate,
            epochs: plan.training.epochs,
            batch_size: plan.training.batch_size,
            seed: derived(seed, "train"),
        };
        let (model, _) = train(&training_set, &train_params)?;

        for approach in &plan.approaches {
            let cfg = plan.search_config(approach, seed);
            let outcome = match approach.method {
                SearchMethod::BaselineGa => run_baseline_ga(&cfg, &model, schema, &failing)?,
                SearchMethod::Moea { .. } => run_search(&cfg, &model, schema, &failing)?,
            };
            let records = execute_archive(&env, &outcome.archive)?;
            let clustering_seed = derived(seed, "analysis");
            let (unique, output_entropy) = output_diversity_metrics(&records, clustering_seed);
            let (input_clusters, input_entropy) =
                input_diversity_metrics(&records, schema, clustering_seed);
            rows.push(CampaignRow {
                approach: approach.name.clone(),
                seed,
                total_failures: records.iter().filter(|r| r.failed).count(),
                unique_failures: unique,
                input_clusters,
                input_entropy,
                output_entropy,
                ttf: time_to_first_failure(&records),
                archive_size: outcome.archive.len(),
            });
        }
    }

    let summaries = summarize(plan, &rows);
    let comparisons = compare(plan, &rows);
    Ok(CampaignReport {
        rows,
        summaries,
        comparisons,
    })
}

fn derived(seed: u64, label: &str) -> u64 {
    stream(seed, label, 0).next_u64()
}

fn samples_for(rows: &[CampaignRow], approach: &str, metric: &str) -> (Vec<f64>, usize) {
    let mut values = Vec::new();
    let mut missing = 0;
    for row in rows.iter().filter(|r| r.approach == approach) {
        match metric_value(row, metric) {
            Some(v) => values.push(v),
            None => missing += 1,
        }
    }
    (values, missing)
}

fn summarize(
    plan: &CampaignPlan,
    rows: &[CampaignRow],
) -> BTreeMap<String, BTreeMap<String, MetricSummary>> {
    let mut summaries = BTreeMap::new();
    for approach in &plan.approaches {
        let mut per_metric = BTreeMap::new();
        for metric in METRICS {
            let (values, missing) = samples_for(rows, &approach.name, metric);
            let summary = if values.is_empty() {
                MetricSummary {
                    median: f64::NAN,
                    iqr: f64::NAN,
                    missing,
                }
            } else {
                MetricSummary {
                    median: median(&values),
                    iqr: quartile_range(&values),
                    missing,
                }
            };
            per_metric.insert(metric.to_string(), summary);
        }
        summaries.insert(approach.name.clone(), per_metric);
    }
    summaries
}

fn compare(plan: &CampaignPlan, rows: &[CampaignRow]) -> Vec<Comparison> {
    let mut comparisons = Vec::new();
    for i in 0..plan.approaches.len() {
        for j in (i + 1)..plan.approaches.len() {
            let a = &plan.approaches[i].name;
            let b = &plan.approaches[j].name;
            for metric in METRICS {
                let (sample_a, _) = samples_for(rows, a, metric);
                let (sample_b, _) = samples_for(rows, b, metric);
                let p_value = wilcoxon_rank_sum(&sample_a, &sample_b).ok();
                let a12 = vargha_delaney_a12(&sample_a, &sample_b).ok();
                comparisons.push(Comparison {
                    approach_a: a.clone(),
                    approach_b: b.clone(),
                    metric: metric.to_string(),
                    p_value,
                    a12,
                });
            }
        }
    }
    comparisons
}

/// CSV of the per-seed raw metrics, one row per campaign cell.
pub fn rows_to_csv(rows: &[CampaignRow]) -> String {
    let mut out = String::from(
        "approach,seed,total_failures,unique_failures,input_clusters,input_entropy,output_entropy,ttf_evaluations,ttf_wall_clock,archive_size\n",
    );
    for row in rows {
        let (ttf_evals, ttf_clock) = match row.ttf {
            Some(t) => (t.evaluations.to_string(), t.wall_clock.to_string()),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.approach,
            row.seed,
            row.total_failures,
            row.unique_failures,
            row.input_clusters,
            row.input_entropy,
            row.output_entropy,
            ttf_evals,
            ttf_clock,
            row.archive_size
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_plan() -> CampaignPlan {
        CampaignPlan {
            env: EnvKind::Parking,
            approaches: vec![
                ApproachSpec {
                    name: "baseline".into(),
                    method: SearchMethod::BaselineGa,
                },
                ApproachSpec {
                    name: "agemoea-knee".into(),
                    method: SearchMethod::Moea {
                        algorithm: MoeaAlgorithm::AgeMoea,
                        diversity: DiversityMetric::Euclidean,
                        selection: SelectionStrategy::Knee,
                    },
                },
            ],
            seeds: vec![1, 2, 3],
            budget: BudgetSpec {
                total_runs: 3,
                generations: 5,
                population_size: 8,
                stagnation_window: 3,
                ..BudgetSpec::default()
            },
            training: TrainingSpec {
                samples: 250,
                epochs: 8,
                ..TrainingSpec::default()
            },
        }
    }

    #[test]
    fn single_approach_plan_is_rejected() {
        let mut plan = tiny_plan();
        plan.approaches.truncate(1);
        assert!(matches!(
            run_campaign(&plan),
            Err(CampaignError::InvalidPlan(_))
        ));
    }

    #[test]
    fn row_count_is_approaches_times_seeds() {
        let plan = tiny_plan();
        let report = run_campaign(&plan).unwrap();
        assert_eq!(report.rows.len(), 6);
        // every cell archived the full budget
        assert!(report.rows.iter().all(|r| r.archive_size == 3));
        // summaries exist for both approaches and all metrics
        assert_eq!(report.summaries.len(), 2);
        for per_metric in report.summaries.values() {
            assert_eq!(per_metric.len(), METRICS.len());
        }
        assert_eq!(report.comparisons.len(), METRICS.len());
    }

    #[test]
    fn report_medians_match_recomputation_from_rows() {
        let plan = tiny_plan();
        let report = run_campaign(&plan).unwrap();
        for (approach, per_metric) in &report.summaries {
            let values: Vec<f64> = report
                .rows
                .iter()
                .filter(|r| &r.approach == approach)
                .map(|r| r.unique_failures as f64)
                .collect();
            let expected = median(&values);
            assert_eq!(per_metric["unique_failures"].median, expected);
        }
    }

    #[test]
    fn campaign_is_deterministic() {
        let plan = tiny_plan();
        let a = run_campaign(&plan).unwrap();
        let b = run_campaign(&plan).unwrap();
        assert_eq!(serde_json::to_string(&a.rows).unwrap(), serde_json::to_string(&b.rows).unwrap());
    }

    #[test]
    fn plan_json_round_trips() {
        let plan = tiny_plan();
        let text = serde_json::to_string_pretty(&plan).unwrap();
        let parsed: CampaignPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.approaches, plan.approaches);
        assert_eq!(parsed.seeds, plan.seeds);
    }
}
