//! Scenario JSON format: one object with a key per schema feature.
//!
//! ```json
//! {
//!     "goal_lane_idx": 0,
//!     "heading_ego": 0.96,
//!     "parked_vehicles_lane_indices": [1, 3, 6],
//!     "position_ego": [1.83, -4.96]
//! }
//! ```
//!
//! Decoding is schema-directed: the descriptor kind determines how each
//! JSON value is interpreted. Serialization is canonical (sorted keys,
//! shortest round-trip float form), so equal configs serialize to equal
//! bytes.

use serde_json::{json, Map, Value};

use super::config::{FeatureValue, ScenarioConfig};
use super::schema::{FeatureKind, FeatureSchema};
use super::ScenarioError;

/// Parses a scenario JSON object against a schema.
pub fn parse_config(text: &str, schema: &FeatureSchema) -> Result<ScenarioConfig, ScenarioError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ScenarioError::ParseError {
        key: "<document>".into(),
        reason: e.to_string(),
    })?;
    config_from_json(&root, schema)
}

/// Decodes an already-parsed JSON value against a schema.
pub fn config_from_json(root: &Value, schema: &FeatureSchema) -> Result<ScenarioConfig, ScenarioError> {
    let obj = root.as_object().ok_or_else(|| ScenarioError::ParseError {
        key: "<document>".into(),
        reason: "expected a JSON object".into(),
    })?;
    let mut values = Vec::with_capacity(schema.feature_count());
    for desc in &schema.features {
        let value = obj.get(&desc.name).ok_or_else(|| ScenarioError::ParseError {
            key: desc.name.clone(),
            reason: "missing key".into(),
        })?;
        values.push(decode_value(&desc.name, &desc.kind, value)?);
    }
    ScenarioConfig::new(values, schema)
}

/// Serializes a config to its canonical JSON text.
pub fn serialize_config(config: &ScenarioConfig, schema: &FeatureSchema) -> String {
    config_to_json(config, schema).to_string()
}

/// Builds the JSON object form of a config.
pub fn config_to_json(config: &ScenarioConfig, schema: &FeatureSchema) -> Value {
    let mut obj = Map::new();
    for (desc, value) in schema.features.iter().zip(config.values()) {
        let v = match value {
            FeatureValue::Real(v) => json!(v),
            FeatureValue::RealVector(vs) => json!(vs),
            FeatureValue::Integer(v) => json!(v),
            FeatureValue::Binary(b) => json!(b),
            FeatureValue::Categorical(c) => json!(c),
            FeatureValue::MembershipList(items) => json!(items),
            FeatureValue::CommandList(pairs) => {
                Value::Array(pairs.iter().map(|(c, v)| json!([c, v])).collect())
            }
        };
        obj.insert(desc.name.clone(), v);
    }
    Value::Object(obj)
}

fn decode_value(key: &str, kind: &FeatureKind, value: &Value) -> Result<FeatureValue, ScenarioError> {
    let parse_err = |reason: &str| ScenarioError::ParseError {
        key: key.into(),
        reason: reason.into(),
    };
    match kind {
        FeatureKind::Real { .. } => value
            .as_f64()
            .map(FeatureValue::Real)
            .ok_or_else(|| parse_err("expected a number")),
        FeatureKind::RealVector { .. } => {
            let arr = value.as_array().ok_or_else(|| parse_err("expected an array of numbers"))?;
            let vs = arr
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| parse_err("expected a number")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FeatureValue::RealVector(vs))
        }
        FeatureKind::Integer { .. } => value
            .as_i64()
            .map(FeatureValue::Integer)
            .ok_or_else(|| parse_err("expected an integer")),
        FeatureKind::Binary => value
            .as_bool()
            .map(FeatureValue::Binary)
            .ok_or_else(|| parse_err("expected a boolean")),
        FeatureKind::Categorical { .. } => value
            .as_u64()
            .map(|v| FeatureValue::Categorical(v as usize))
            .ok_or_else(|| parse_err("expected a category index")),
        FeatureKind::MembershipList { .. } => {
            let arr = value.as_array().ok_or_else(|| parse_err("expected an array of indices"))?;
            let items = arr
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|v| v as usize)
                        .ok_or_else(|| parse_err("expected an element index"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FeatureValue::MembershipList(items))
        }
        FeatureKind::CommandList { .. } => {
            let arr = value.as_array().ok_or_else(|| parse_err("expected an array of pairs"))?;
            let pairs = arr
                .iter()
                .map(|pair| {
                    let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        parse_err("expected [command, value] pairs")
                    })?;
                    let cmd = pair[0]
                        .as_u64()
                        .ok_or_else(|| parse_err("expected a command index"))?;
                    let v = pair[1].as_f64().ok_or_else(|| parse_err("expected a value"))?;
                    Ok((cmd as usize, v))
                })
                .collect::<Result<Vec<_>, ScenarioError>>()?;
            Ok(FeatureValue::CommandList(pairs))
        }
    }
}
