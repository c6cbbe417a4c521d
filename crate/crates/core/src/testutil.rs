//! Shared helpers for unit tests.

use rand::Rng;

use crate::rng::stream;
use crate::scenario::{
    validate_repair, FeatureDescriptor, FeatureKind, FeatureSchema, FeatureValue, ScenarioConfig,
    SchemaConstraint,
};

/// A parking-style schema: categorical goal, real heading, occupancy list,
/// 2-D start position, with the goal lane excluded from the occupied set.
pub fn parking_like_schema() -> FeatureSchema {
    FeatureSchema::new(
        vec![
            FeatureDescriptor {
                name: "goal_lane_idx".into(),
                kind: FeatureKind::Categorical { count: 20 },
            },
            FeatureDescriptor {
                name: "heading_ego".into(),
                kind: FeatureKind::Real {
                    min: -std::f64::consts::PI,
                    max: std::f64::consts::PI,
                },
            },
            FeatureDescriptor {
                name: "parked_vehicles_lane_indices".into(),
                kind: FeatureKind::MembershipList {
                    domain_size: 20,
                    max_len: 10,
                },
            },
            FeatureDescriptor {
                name: "position_ego".into(),
                kind: FeatureKind::RealVector {
                    min: vec![-10.0, -8.0],
                    max: vec![10.0, 0.0],
                },
            },
        ],
        vec![SchemaConstraint::ExcludeCategoryFromList {
            category_feature: "goal_lane_idx".into(),
            list_feature: "parked_vehicles_lane_indices".into(),
        }],
    )
    .unwrap()
}

/// A uniformly random valid config for the parking-like schema.
pub fn random_parking_config(schema: &FeatureSchema, seed: u64, index: u64) -> ScenarioConfig {
    let mut rng = stream(seed, "testcfg", index);
    let lanes: Vec<usize> = (0..rng.random_range(0..=10usize))
        .map(|_| rng.random_range(0..20usize))
        .collect();
    let raw = ScenarioConfig::from_values_unchecked(vec![
        FeatureValue::Categorical(rng.random_range(0..20usize)),
        FeatureValue::Real(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)),
        FeatureValue::MembershipList(lanes),
        FeatureValue::RealVector(vec![
            rng.random_range(-10.0..10.0),
            rng.random_range(-8.0..0.0),
        ]),
    ]);
    validate_repair(&raw, schema, &mut rng)
}
