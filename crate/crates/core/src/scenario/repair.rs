//! Repair operator: maps structurally complete configs onto valid ones.

use rand::Rng;

use super::config::{FeatureValue, ScenarioConfig};
use super::schema::{FeatureKind, FeatureSchema, SchemaConstraint};

/// Repairs a structurally complete config into a schema-valid one.
///
/// Out-of-bounds scalars are clamped, list duplicates dropped, over-long
/// lists truncated by removing uniformly random elements, and schema
/// constraints enforced. Total on structurally complete inputs; a valid
/// config passes through unchanged (repair is a fixpoint).
pub fn validate_repair<R: Rng>(
    config: &ScenarioConfig,
    schema: &FeatureSchema,
    rng: &mut R,
) -> ScenarioConfig {
    assert_eq!(
        config.values().len(),
        schema.feature_count(),
        "repair requires a structurally complete config"
    );
    let mut repaired = config.clone();
    for (desc, value) in schema.features.iter().zip(repaired.values_mut()) {
        match (&desc.kind, value) {
            (FeatureKind::Real { min, max }, FeatureValue::Real(v)) => {
                *v = clamp_finite(*v, *min, *max);
            }
            (FeatureKind::RealVector { min, max }, FeatureValue::RealVector(vs)) => {
                vs.resize(min.len(), 0.0);
                for ((v, lo), hi) in vs.iter_mut().zip(min).zip(max) {
                    *v = clamp_finite(*v, *lo, *hi);
                }
            }
            (FeatureKind::Integer { min, max }, FeatureValue::Integer(v)) => {
                *v = (*v).clamp(*min, *max);
            }
            (FeatureKind::Binary, FeatureValue::Binary(_)) => {}
            (FeatureKind::Categorical { count }, FeatureValue::Categorical(v)) => {
                *v = (*v).min(count - 1);
            }
            (
                FeatureKind::MembershipList {
                    domain_size,
                    max_len,
                },
                FeatureValue::MembershipList(items),
            ) => {
                items.retain(|i| i < domain_size);
                dedupe_preserving_order(items);
                truncate_random(items, *max_len, rng);
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
                for (cmd, v) in pairs.iter_mut() {
                    *cmd = (*cmd).min(commands - 1);
                    *v = clamp_finite(*v, *value_min, *value_max);
                }
                truncate_random(pairs, *max_len, rng);
            }
            (kind, value) => {
                panic!(
                    "feature '{}': value variant {value:?} does not match kind {kind:?}",
                    desc.name
                );
            }
        }
    }
    for c in &schema.constraints {
        let SchemaConstraint::ExcludeCategoryFromList {
            category_feature,
            list_feature,
        } = c;
        let cat = match repaired.value_by_name(category_feature, schema) {
            Some(FeatureValue::Categorical(v)) => *v,
            _ => continue,
        };
        let list_idx = schema.feature_index(list_feature).expect("validated constraint");
        if let FeatureValue::MembershipList(items) = &mut repaired.values_mut()[list_idx] {
            items.retain(|&i| i != cat);
        }
    }
    debug_assert!(repaired.validate(schema).is_ok());
    repaired
}

fn clamp_finite(v: f64, min: f64, max: f64) -> f64 {
    if v.is_nan() {
        min
    } else {
        v.clamp(min, max)
    }
}

fn dedupe_preserving_order(items: &mut Vec<usize>) {
    let mut seen = Vec::with_capacity(items.len());
    items.retain(|i| {
        if seen.contains(i) {
            false
        } else {
            seen.push(*i);
            true
        }
    });
}

/// Removes uniformly random elements until `items` has at most `max_len`.
fn truncate_random<T, R: Rng>(items: &mut Vec<T>, max_len: usize, rng: &mut R) {
    while items.len() > max_len {
        let victim = rng.random_range(0..items.len());
        items.remove(victim);
    }
}
