//! Scenario configurations: typed values for every feature in a schema.

use super::schema::{FeatureKind, FeatureSchema};
use super::ScenarioError;

/// A value for one feature. The variant must match the descriptor kind.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureValue {
    Real(f64),
    RealVector(Vec<f64>),
    Integer(i64),
    Binary(bool),
    Categorical(usize),
    /// Element indices; order is irrelevant, duplicates are invalid.
    MembershipList(Vec<usize>),
    /// Ordered (command, value) pairs.
    CommandList(Vec<(usize, f64)>),
}

/// One test scenario: a value per schema feature, in schema order.
///
/// Immutable by convention: operators produce new configs rather than
/// mutating in place.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    values: Vec<FeatureValue>,
}

impl ScenarioConfig {
    /// Builds a config and validates it against the schema.
    pub fn new(values: Vec<FeatureValue>, schema: &FeatureSchema) -> Result<Self, ScenarioError> {
        let config = ScenarioConfig { values };
        config.validate(schema)?;
        Ok(config)
    }

    /// Builds a config without bound checks. For operator internals that
    /// repair immediately afterwards.
    pub(crate) fn from_values_unchecked(values: Vec<FeatureValue>) -> Self {
        ScenarioConfig { values }
    }

    pub fn values(&self) -> &[FeatureValue] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &FeatureValue {
        &self.values[index]
    }

    pub fn value_by_name<'a>(&'a self, name: &str, schema: &FeatureSchema) -> Option<&'a FeatureValue> {
        schema.feature_index(name).map(|i| &self.values[i])
    }

    pub(crate) fn values_mut(&mut self) -> &mut Vec<FeatureValue> {
        &mut self.values
    }

    /// Checks structural completeness, bounds, list uniqueness and schema
    /// constraints.
    pub fn validate(&self, schema: &FeatureSchema) -> Result<(), ScenarioError> {
        if self.values.len() != schema.feature_count() {
            return Err(ScenarioError::InvalidConfig(format!(
                "expected {} feature values, got {}",
                schema.feature_count(),
                self.values.len()
            )));
        }
        for (desc, value) in schema.features.iter().zip(&self.values) {
            let fail = |msg: String| Err(ScenarioError::InvalidConfig(msg));
            match (&desc.kind, value) {
                (FeatureKind::Real { min, max }, FeatureValue::Real(v)) => {
                    if !v.is_finite() || v < min || v > max {
                        return fail(format!("feature '{}': {v} outside [{min}, {max}]", desc.name));
                    }
                }
                (FeatureKind::RealVector { min, max }, FeatureValue::RealVector(vs)) => {
                    if vs.len() != min.len() {
                        return fail(format!(
                            "feature '{}': expected {} components, got {}",
                            desc.name,
                            min.len(),
                            vs.len()
                        ));
                    }
                    for ((v, lo), hi) in vs.iter().zip(min).zip(max) {
                        if !v.is_finite() || v < lo || v > hi {
                            return fail(format!("feature '{}': {v} outside [{lo}, {hi}]", desc.name));
                        }
                    }
                }
                (FeatureKind::Integer { min, max }, FeatureValue::Integer(v)) => {
                    if v < min || v > max {
                        return fail(format!("feature '{}': {v} outside [{min}, {max}]", desc.name));
                    }
                }
                (FeatureKind::Binary, FeatureValue::Binary(_)) => {}
                (FeatureKind::Categorical { count }, FeatureValue::Categorical(v)) => {
                    if v >= count {
                        return fail(format!("feature '{}': category {v} not below {count}", desc.name));
                    }
                }
                (
                    FeatureKind::MembershipList {
                        domain_size,
                        max_len,
                    },
                    FeatureValue::MembershipList(items),
                ) => {
                    if items.len() > *max_len {
                        return fail(format!(
                            "feature '{}': {} elements exceed max length {max_len}",
                            desc.name,
                            items.len()
                        ));
                    }
                    for (i, item) in items.iter().enumerate() {
                        if item >= domain_size {
                            return fail(format!("feature '{}': element {item} outside domain", desc.name));
                        }
                        if items[..i].contains(item) {
                            return fail(format!("feature '{}': duplicate element {item}", desc.name));
                        }
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
                    if pairs.len() > *max_len {
                        return fail(format!(
                            "feature '{}': {} pairs exceed max length {max_len}",
                            desc.name,
                            pairs.len()
                        ));
                    }
                    for (cmd, v) in pairs {
                        if cmd >= commands {
                            return fail(format!("feature '{}': command {cmd} not below {commands}", desc.name));
                        }
                        if !v.is_finite() || v < value_min || v > value_max {
                            return fail(format!(
                                "feature '{}': value {v} outside [{value_min}, {value_max}]",
                                desc.name
                            ));
                        }
                    }
                }
                (kind, got) => {
                    return fail(format!(
                        "feature '{}': value variant does not match kind {kind:?} (got {got:?})",
                        desc.name
                    ));
                }
            }
        }
        for c in &schema.constraints {
            let super::schema::SchemaConstraint::ExcludeCategoryFromList {
                category_feature,
                list_feature,
            } = c;
            let cat = self.value_by_name(category_feature, schema);
            let list = self.value_by_name(list_feature, schema);
            if let (Some(FeatureValue::Categorical(cat)), Some(FeatureValue::MembershipList(items))) =
                (cat, list)
            {
                if items.contains(cat) {
                    return Err(ScenarioError::InvalidConfig(format!(
                        "feature '{list_feature}': contains excluded category {cat} of '{category_feature}'"
                    )));
                }
            }
        }
        Ok(())
    }
}
