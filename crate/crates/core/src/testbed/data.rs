//! Training-log generation and archive execution against a testbed
//! environment.

use rand::Rng;

use crate::analysis::ExecutionRecord;
use crate::rng::stream;
use crate::scenario::{
    encode, validate_repair, FeatureKind, FeatureSchema, FeatureValue, ScenarioConfig,
    ScenarioError,
};
use crate::search::Archive;
use crate::surrogate::TrainingSet;

use super::TestbedEnv;

/// Uniform sample within the schema bounds, repaired into validity.
pub fn uniform_config<R: Rng>(schema: &FeatureSchema, rng: &mut R) -> ScenarioConfig {
    let values = schema
        .features
        .iter()
        .map(|f| match &f.kind {
            FeatureKind::Real { min, max } => FeatureValue::Real(rng.random_range(*min..*max)),
            FeatureKind::RealVector { min, max } => FeatureValue::RealVector(
                min.iter()
                    .zip(max)
                    .map(|(&lo, &hi)| rng.random_range(lo..hi))
                    .collect(),
            ),
            FeatureKind::Integer { min, max } => {
                FeatureValue::Integer(rng.random_range(*min..=*max))
            }
            FeatureKind::Binary => FeatureValue::Binary(rng.random()),
            FeatureKind::Categorical { count } => {
                FeatureValue::Categorical(rng.random_range(0..*count))
            }
            FeatureKind::MembershipList {
                domain_size,
                max_len,
            } => {
                let len = rng.random_range(0..=*max_len);
                FeatureValue::MembershipList(
                    (0..len).map(|_| rng.random_range(0..*domain_size)).collect(),
                )
            }
            FeatureKind::CommandList {
                commands,
                value_min,
                value_max,
                max_len,
            } => {
                let len = rng.random_range(0..=*max_len);
                FeatureValue::CommandList(
                    (0..len)
                        .map(|_| {
                            (
                                rng.random_range(0..*commands),
                                rng.random_range(*value_min..*value_max),
                            )
                        })
                        .collect(),
                )
            }
        })
        .collect();
    validate_repair(
        &ScenarioConfig::from_values_unchecked(values),
        schema,
        rng,
    )
}

/// Labelled scenarios from uniform sampling: the synthetic analogue of an
/// agent's training episodes.
#[derive(Debug, Clone)]
pub struct TrainingLog {
    pub records: Vec<ExecutionRecord>,
}

impl TrainingLog {
    pub fn failing_configs(&self) -> Vec<ScenarioConfig> {
        self.records
            .iter()
            .filter(|r| r.failed)
            .map(|r| r.config.clone())
            .collect()
    }

    pub fn failure_rate(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().filter(|r| r.failed).count() as f64 / self.records.len() as f64
    }

    /// Encoded (vector, label) pairs for surrogate training.
    pub fn to_training_set(&self, schema: &FeatureSchema) -> Result<TrainingSet, ScenarioError> {
        let examples = self
            .records
            .iter()
            .map(|r| Ok((encode(&r.config, schema)?, u8::from(r.failed))))
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        Ok(TrainingSet::new(examples))
    }
}

/// Samples `n` uniform scenarios, executes each, and labels them. Record
/// counters run in execution order: `evaluations` is the 1-based ordinal,
/// `wall_clock` accumulates simulated seconds.
pub fn generate_training_log(env: &TestbedEnv, n: usize, seed: u64) -> TrainingLog {
    assert!(n >= 1, "training log needs at least one sample");
    let schema = env.schema();
    let mut rng = stream(seed, "training-data", 0);
    let mut records = Vec::with_capacity(n);
    let mut clock = 0.0;
    for ordinal in 1..=n {
        let config = uniform_config(schema, &mut rng);
        let mut record = env
            .execute(&config)
            .expect("uniform configs are schema-valid");
        clock += record.wall_clock;
        record.evaluations = ordinal as u64;
        record.wall_clock = clock;
        records.push(record);
    }
    TrainingLog { records }
}

/// Executes archived scenarios in order. Each record keeps the surrogate
/// evaluation counter from its selection and accumulates virtual wall
/// clock across the executions.
pub fn execute_archive(env: &TestbedEnv, archive: &Archive) -> Result<Vec<ExecutionRecord>, ScenarioError> {
    let mut records = Vec::with_capacity(archive.len());
    let mut clock = 0.0;
    for entry in &archive.entries {
        let mut record = env.execute(&entry.config)?;
        clock += record.wall_clock;
        record.evaluations = entry.evaluations;
        record.wall_clock = clock;
        records.push(record);
    }
    Ok(records)
}
