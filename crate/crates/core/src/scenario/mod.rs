//! Scenario schemas, configurations, validation/repair and encoding.

mod config;
mod encode;
mod json;
mod repair;
mod schema;

pub use config::{FeatureValue, ScenarioConfig};
pub use encode::{encode, EncodedVector};
pub use json::{config_from_json, config_to_json, parse_config, serialize_config};
pub use repair::validate_repair;
pub use schema::{FeatureDescriptor, FeatureKind, FeatureSchema, SchemaConstraint};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("parse error at key '{key}': {reason}")]
    ParseError { key: String, reason: String },
}
