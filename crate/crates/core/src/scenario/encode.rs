//! Fixed-width numeric encoding of scenario configurations.
//!
//! Layout per feature, in schema order:
//! - real / integer: min-max scaled to [0,1], width 1 (or `dims` for vectors)
//! - binary: 0.0 or 1.0
//! - categorical: one-hot over the category count
//! - membership list: binary occupancy over the element domain
//! - command list: `max_len` slots of (command one-hot, scaled value),
//!   unused slots all-zero

use super::config::{FeatureValue, ScenarioConfig};
use super::schema::{FeatureKind, FeatureSchema};
use super::ScenarioError;

/// Fixed-width numeric view of a config; input to the surrogate and to the
/// diversity metrics.
pub type EncodedVector = Vec<f64>;

/// Encodes a valid config into its fixed-width vector.
///
/// Deterministic and total on valid configs; the output width equals
/// [`FeatureSchema::encoded_width`].
pub fn encode(config: &ScenarioConfig, schema: &FeatureSchema) -> Result<EncodedVector, ScenarioError> {
    config.validate(schema)?;
    let mut out = Vec::with_capacity(schema.encoded_width());
    for (desc, value) in schema.features.iter().zip(config.values()) {
        match (&desc.kind, value) {
            (FeatureKind::Real { min, max }, FeatureValue::Real(v)) => {
                out.push((v - min) / (max - min));
            }
            (FeatureKind::RealVector { min, max }, FeatureValue::RealVector(vs)) => {
                for ((v, lo), hi) in vs.iter().zip(min).zip(max) {
                    out.push((v - lo) / (hi - lo));
                }
            }
            (FeatureKind::Integer { min, max }, FeatureValue::Integer(v)) => {
                out.push((v - min) as f64 / (max - min) as f64);
            }
            (FeatureKind::Binary, FeatureValue::Binary(b)) => {
                out.push(if *b { 1.0 } else { 0.0 });
            }
            (FeatureKind::Categorical { count }, FeatureValue::Categorical(v)) => {
                let base = out.len();
                out.resize(base + count, 0.0);
                out[base + v] = 1.0;
            }
            (FeatureKind::MembershipList { domain_size, .. }, FeatureValue::MembershipList(items)) => {
                let base = out.len();
                out.resize(base + domain_size, 0.0);
                for item in items {
                    out[base + item] = 1.0;
                }
            }
            (
                FeatureKind::CommandList {
                    commands,
                    value_min,
                    value_max,
                    max_len,
                },
                FeatureValue::CommandList(pairs),
            ) => {
                let slot = commands + 1;
                let base = out.len();
                out.resize(base + max_len * slot, 0.0);
                for (i, (cmd, v)) in pairs.iter().enumerate() {
                    out[base + i * slot + cmd] = 1.0;
                    out[base + i * slot + commands] = (v - value_min) / (value_max - value_min);
                }
            }
            // validate() has already rejected mismatched variants
            _ => unreachable!("validated config matches schema kinds"),
        }
    }
    debug_assert_eq!(out.len(), schema.encoded_width());
    Ok(out)
}
