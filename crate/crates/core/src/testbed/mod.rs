//! Synthetic desk-scale environments with analytic failure oracles, plus
//! the campaign harness that runs the full pipeline against them.

mod campaign;
mod data;
mod parking;
mod walker;

pub use campaign::{
    rows_to_csv, run_campaign, ApproachSpec, BudgetSpec, CampaignError, CampaignPlan,
    CampaignReport, CampaignRow, Comparison, MetricSummary, SearchMethod, TrainingSpec, METRICS,
};
pub use data::{execute_archive, generate_training_log, uniform_config, TrainingLog};
pub use parking::{parking_schema, ToyParkingEnv};
pub use walker::{walker_schema, RidgeWalkerEnv};

use serde::{Deserialize, Serialize};

use crate::analysis::ExecutionRecord;
use crate::scenario::{FeatureSchema, ScenarioConfig, ScenarioError};

/// Named environments buildable from configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvKind {
    Parking,
    Walker,
}

impl EnvKind {
    pub fn build(self) -> TestbedEnv {
        match self {
            EnvKind::Parking => TestbedEnv::Parking(ToyParkingEnv::default()),
            EnvKind::Walker => TestbedEnv::Walker(RidgeWalkerEnv::default()),
        }
    }
}

impl std::str::FromStr for EnvKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "parking" => Ok(EnvKind::Parking),
            "walker" => Ok(EnvKind::Walker),
            other => Err(format!("unknown environment '{other}' (expected parking|walker)")),
        }
    }
}

/// A concrete testbed environment.
#[derive(Debug, Clone)]
pub enum TestbedEnv {
    Parking(ToyParkingEnv),
    Walker(RidgeWalkerEnv),
}

impl TestbedEnv {
    pub fn schema(&self) -> &FeatureSchema {
        match self {
            TestbedEnv::Parking(env) => env.schema(),
            TestbedEnv::Walker(env) => env.schema(),
        }
    }

    /// Pure execution: identical configs give identical records.
    pub fn execute(&self, config: &ScenarioConfig) -> Result<ExecutionRecord, ScenarioError> {
        match self {
            TestbedEnv::Parking(env) => env.simulate(config),
            TestbedEnv::Walker(env) => env.simulate(config),
        }
    }
}
