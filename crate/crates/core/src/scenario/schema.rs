//! Feature schemas: the typed shape of a scenario and its numeric encoding.

use serde::{Deserialize, Serialize};

use super::ScenarioError;

/// The kind of a single scenario feature, with its bounds or domain.
///
/// Variable-length lists come in two flavours with different encodings:
/// [`FeatureKind::MembershipList`] is an unordered subset of a finite element
/// domain and encodes to a binary occupancy vector over that domain;
/// [`FeatureKind::CommandList`] is an ordered sequence of (command, value)
/// pairs and encodes positionally, zero-padded to its maximum length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureKind {
    Real {
        min: f64,
        max: f64,
    },
    /// Fixed-length vector of reals (e.g. a 2-D start position).
    RealVector {
        min: Vec<f64>,
        max: Vec<f64>,
    },
    Integer {
        min: i64,
        max: i64,
    },
    Binary,
    Categorical {
        count: usize,
    },
    /// Unordered subset of `{0..domain_size}`, at most `max_len` elements.
    MembershipList {
        domain_size: usize,
        max_len: usize,
    },
    /// Ordered list of (command, value) pairs, at most `max_len` of them.
    CommandList {
        commands: usize,
        value_min: f64,
        value_max: f64,
        max_len: usize,
    },
}

impl FeatureKind {
    /// Width this feature occupies in the encoded vector.
    pub fn encoded_width(&self) -> usize {
        match self {
            FeatureKind::Real { .. } => 1,
            FeatureKind::RealVector { min, .. } => min.len(),
            FeatureKind::Integer { .. } => 1,
            FeatureKind::Binary => 1,
            FeatureKind::Categorical { count } => *count,
            FeatureKind::MembershipList { domain_size, .. } => *domain_size,
            FeatureKind::CommandList {
                commands, max_len, ..
            } => max_len * (commands + 1),
        }
    }

    fn check(&self, feature: &str) -> Result<(), ScenarioError> {
        let bad = |msg: String| Err(ScenarioError::InvalidSchema(msg));
        match self {
            FeatureKind::Real { min, max } => {
                if !(min < max) || !min.is_finite() || !max.is_finite() {
                    return bad(format!("feature '{feature}': real bounds must satisfy min < max"));
                }
            }
            FeatureKind::RealVector { min, max } => {
                if min.is_empty() || min.len() != max.len() {
                    return bad(format!("feature '{feature}': vector bounds must be non-empty and equal length"));
                }
                for (lo, hi) in min.iter().zip(max) {
                    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                        return bad(format!("feature '{feature}': vector bounds must satisfy min < max"));
                    }
                }
            }
            FeatureKind::Integer { min, max } => {
                if min >= max {
                    return bad(format!("feature '{feature}': integer bounds must satisfy min < max"));
                }
            }
            FeatureKind::Binary => {}
            FeatureKind::Categorical { count } => {
                if *count < 2 {
                    return bad(format!("feature '{feature}': categorical needs at least 2 categories"));
                }
            }
            FeatureKind::MembershipList {
                domain_size,
                max_len,
            } => {
                if *domain_size == 0 {
                    return bad(format!("feature '{feature}': membership domain must be non-empty"));
                }
                if *max_len == 0 || max_len > domain_size {
                    return bad(format!("feature '{feature}': list max length must be in 1..=domain_size"));
                }
            }
            FeatureKind::CommandList {
                commands,
                value_min,
                value_max,
                max_len,
            } => {
                if *commands < 2 {
                    return bad(format!("feature '{feature}': command list needs at least 2 commands"));
                }
                if !(value_min < value_max) {
                    return bad(format!("feature '{feature}': command value bounds must satisfy min < max"));
                }
                if *max_len == 0 {
                    return bad(format!("feature '{feature}': list max length must be at least 1"));
                }
            }
        }
        Ok(())
    }
}

/// One named feature in a schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDescriptor {
    pub name: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

/// Cross-feature constraints enforced by repair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum SchemaConstraint {
    /// The current value of a categorical feature may not appear as an
    /// element of a membership-list feature; repair drops it from the list.
    ExcludeCategoryFromList {
        category_feature: String,
        list_feature: String,
    },
}

/// An ordered list of feature descriptors plus cross-feature constraints.
///
/// The schema fixes the genotype layout: feature order determines both the
/// crossover cut positions and the encoded block layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub features: Vec<FeatureDescriptor>,
    #[serde(default)]
    pub constraints: Vec<SchemaConstraint>,
}

impl FeatureSchema {
    /// Validates names, bounds and constraint references.
    pub fn new(
        features: Vec<FeatureDescriptor>,
        constraints: Vec<SchemaConstraint>,
    ) -> Result<Self, ScenarioError> {
        if features.is_empty() {
            return Err(ScenarioError::InvalidSchema("schema has no features".into()));
        }
        for (i, f) in features.iter().enumerate() {
            f.kind.check(&f.name)?;
            if features[..i].iter().any(|g| g.name == f.name) {
                return Err(ScenarioError::InvalidSchema(format!(
                    "duplicate feature name '{}'",
                    f.name
                )));
            }
        }
        let schema = FeatureSchema {
            features,
            constraints,
        };
        for c in &schema.constraints {
            let SchemaConstraint::ExcludeCategoryFromList {
                category_feature,
                list_feature,
            } = c;
            let cat = schema.descriptor(category_feature).ok_or_else(|| {
                ScenarioError::InvalidSchema(format!("constraint references unknown feature '{category_feature}'"))
            })?;
            let list = schema.descriptor(list_feature).ok_or_else(|| {
                ScenarioError::InvalidSchema(format!("constraint references unknown feature '{list_feature}'"))
            })?;
            match (&cat.kind, &list.kind) {
                (FeatureKind::Categorical { .. }, FeatureKind::MembershipList { .. }) => {}
                _ => {
                    return Err(ScenarioError::InvalidSchema(
                        "exclude_category_from_list needs a categorical and a membership list".into(),
                    ))
                }
            }
        }
        Ok(schema)
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn descriptor(&self, name: &str) -> Option<&FeatureDescriptor> {
        self.features.iter().find(|f| f.name == name)
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// Total width of the encoded vector. Pure function of the schema.
    pub fn encoded_width(&self) -> usize {
        self.features.iter().map(|f| f.kind.encoded_width()).sum()
    }

    /// Half-open encoded index range of each feature, in schema order.
    pub fn encoded_blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut blocks = Vec::with_capacity(self.features.len());
        let mut offset = 0;
        for f in &self.features {
            let w = f.kind.encoded_width();
            blocks.push(offset..offset + w);
            offset += w;
        }
        blocks
    }

    /// Parses a schema from its JSON document form.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let schema: FeatureSchema = serde_json::from_str(text)
            .map_err(|e| ScenarioError::InvalidSchema(format!("schema JSON: {e}")))?;
        // Re-run construction checks on the deserialized value.
        FeatureSchema::new(schema.features, schema.constraints)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(name: &str, min: f64, max: f64) -> FeatureDescriptor {
        FeatureDescriptor {
            name: name.into(),
            kind: FeatureKind::Real { min, max },
        }
    }

    #[test]
    fn encoded_width_sums_feature_blocks() {
        let schema = FeatureSchema::new(
            vec![
                FeatureDescriptor {
                    name: "goal".into(),
                    kind: FeatureKind::Categorical { count: 20 },
                },
                real("heading", -1.0, 1.0),
                FeatureDescriptor {
                    name: "occupied".into(),
                    kind: FeatureKind::MembershipList {
                        domain_size: 20,
                        max_len: 10,
                    },
                },
                FeatureDescriptor {
                    name: "pos".into(),
                    kind: FeatureKind::RealVector {
                        min: vec![-10.0, -8.0],
                        max: vec![10.0, 0.0],
                    },
                },
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(schema.encoded_width(), 20 + 1 + 20 + 2);
        assert_eq!(
            schema.encoded_blocks(),
            vec![0..20, 20..21, 21..41, 41..43]
        );
    }

    #[test]
    fn command_list_width_is_positional() {
        let kind = FeatureKind::CommandList {
            commands: 3,
            value_min: 0.0,
            value_max: 1.0,
            max_len: 12,
        };
        assert_eq!(kind.encoded_width(), 12 * 4);
    }

    #[test]
    fn rejects_duplicate_names_and_bad_bounds() {
        assert!(FeatureSchema::new(vec![real("a", 0.0, 1.0), real("a", 0.0, 1.0)], vec![]).is_err());
        assert!(FeatureSchema::new(vec![real("a", 1.0, 1.0)], vec![]).is_err());
        assert!(FeatureSchema::new(
            vec![FeatureDescriptor {
                name: "c".into(),
                kind: FeatureKind::Categorical { count: 1 },
            }],
            vec![]
        )
        .is_err());
    }

    #[test]
    fn schema_json_round_trips() {
        let schema = FeatureSchema::new(
            vec![
                real("x", 0.0, 10.0),
                FeatureDescriptor {
                    name: "cmds".into(),
                    kind: FeatureKind::CommandList {
                        commands: 4,
                        value_min: -1.0,
                        value_max: 1.0,
                        max_len: 12,
                    },
                },
            ],
            vec![],
        )
        .unwrap();
        let parsed = FeatureSchema::from_json(&schema.to_json()).unwrap();
        assert_eq!(schema, parsed);
    }
}
