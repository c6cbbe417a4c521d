//! Variation operators: single-point crossover and saliency-guided
//! mutation. Both repair their outputs, so emitted configs are always
//! schema-valid.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::scenario::{
    validate_repair, FeatureKind, FeatureSchema, FeatureValue, ScenarioConfig,
};

/// Mutation tuning knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MutationParams {
    /// Fraction of features perturbed per call (at least one).
    pub breadth: f64,
    /// Polynomial-mutation distribution index for bounded numeric features.
    pub eta: f64,
}

impl Default for MutationParams {
    fn default() -> Self {
        MutationParams {
            breadth: 0.25,
            eta: 20.0,
        }
    }
}

/// Single-point crossover over schema feature order.
///
/// The cut index is uniform in `1..feature_count`; features are swapped
/// whole, so list features transfer atomically. Children are repaired.
/// With a single-feature schema the children are copies of the parents.
pub fn single_point_crossover<R: Rng>(
    p1: &ScenarioConfig,
    p2: &ScenarioConfig,
    schema: &FeatureSchema,
    rng: &mut R,
) -> (ScenarioConfig, ScenarioConfig) {
    let n = schema.feature_count();
    if n < 2 {
        return (p1.clone(), p2.clone());
    }
    let cut = rng.random_range(1..n);
    let mut c1 = Vec::with_capacity(n);
    let mut c2 = Vec::with_capacity(n);
    for i in 0..n {
        if i < cut {
            c1.push(p1.value(i).clone());
            c2.push(p2.value(i).clone());
        } else {
            c1.push(p2.value(i).clone());
            c2.push(p1.value(i).clone());
        }
    }
    (
        validate_repair(&ScenarioConfig::from_values_unchecked(c1), schema, rng),
        validate_repair(&ScenarioConfig::from_values_unchecked(c2), schema, rng),
    )
}

/// Saliency-guided mutation.
///
/// Draws `ceil(breadth * feature_count)` distinct features (at least one)
/// by weighted sampling without replacement proportional to the saliency
/// weights, perturbs each by a type-specific operator, and repairs the
/// result. `weights` must have one entry per schema feature.
pub fn mutate<R: Rng>(
    config: &ScenarioConfig,
    weights: &[f64],
    schema: &FeatureSchema,
    params: &MutationParams,
    rng: &mut R,
) -> ScenarioConfig {
    let n = schema.feature_count();
    assert_eq!(weights.len(), n, "one saliency weight per feature");
    let count = ((params.breadth * n as f64).ceil() as usize).clamp(1, n);
    let chosen = sample_weighted_without_replacement(weights, count, rng);

    let mut values: Vec<FeatureValue> = config.values().to_vec();
    for idx in chosen {
        let kind = &schema.features[idx].kind;
        mutate_value(&mut values[idx], kind, params.eta, rng);
    }
    validate_repair(&ScenarioConfig::from_values_unchecked(values), schema, rng)
}

fn mutate_value<R: Rng>(value: &mut FeatureValue, kind: &FeatureKind, eta: f64, rng: &mut R) {
    match (kind, value) {
        (FeatureKind::Real { min, max }, FeatureValue::Real(v)) => {
            *v = polynomial_mutation(*v, *min, *max, eta, rng);
        }
        (FeatureKind::RealVector { min, max }, FeatureValue::RealVector(vs)) => {
            for ((v, lo), hi) in vs.iter_mut().zip(min).zip(max) {
                *v = polynomial_mutation(*v, *lo, *hi, eta, rng);
            }
        }
        (FeatureKind::Integer { min, max }, FeatureValue::Integer(v)) => {
            let mutated = polynomial_mutation(*v as f64, *min as f64, *max as f64, eta, rng);
            *v = (mutated.round() as i64).clamp(*min, *max);
        }
        (FeatureKind::Binary, FeatureValue::Binary(b)) => {
            *b = !*b;
        }
        (FeatureKind::Categorical { count }, FeatureValue::Categorical(v)) => {
            let other = rng.random_range(0..count - 1);
            *v = if other >= *v { other + 1 } else { other };
        }
        (
            FeatureKind::MembershipList {
                domain_size,
                max_len,
            },
            FeatureValue::MembershipList(items),
        ) => {
            mutate_membership_list(items, *domain_size, *max_len, rng);
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
            mutate_command_list(pairs, *commands, *value_min, *value_max, *max_len, rng);
        }
        (kind, value) => panic!("value {value:?} does not match kind {kind:?}"),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum ListOp {
    Remove,
    Add,
    Modify,
}

/// One of removal, addition or element modification, chosen uniformly among
/// the operations applicable to the current list.
fn mutate_membership_list<R: Rng>(
    items: &mut Vec<usize>,
    domain_size: usize,
    max_len: usize,
    rng: &mut R,
) {
    let absent: Vec<usize> = (0..domain_size).filter(|i| !items.contains(i)).collect();
    let mut ops = Vec::with_capacity(3);
    if !items.is_empty() {
        ops.push(ListOp::Remove);
    }
    if items.len() < max_len && !absent.is_empty() {
        ops.push(ListOp::Add);
    }
    if !items.is_empty() && !absent.is_empty() {
        ops.push(ListOp::Modify);
    }
    let Some(&op) = pick(&ops, rng) else { return };
    match op {
        ListOp::Remove => {
            let idx = rng.random_range(0..items.len());
            items.remove(idx);
        }
        ListOp::Add => {
            items.push(absent[rng.random_range(0..absent.len())]);
        }
        ListOp::Modify => {
            let idx = rng.random_range(0..items.len());
            items[idx] = absent[rng.random_range(0..absent.len())];
        }
    }
}

fn mutate_command_list<R: Rng>(
    pairs: &mut Vec<(usize, f64)>,
    commands: usize,
    value_min: f64,
    value_max: f64,
    max_len: usize,
    rng: &mut R,
) {
    let mut ops = Vec::with_capacity(3);
    if !pairs.is_empty() {
        ops.push(ListOp::Remove);
    }
    if pairs.len() < max_len {
        ops.push(ListOp::Add);
    }
    if !pairs.is_empty() {
        ops.push(ListOp::Modify);
    }
    let Some(&op) = pick(&ops, rng) else { return };
    let draw_pair = |rng: &mut R| {
        (
            rng.random_range(0..commands),
            rng.random_range(value_min..value_max),
        )
    };
    match op {
        ListOp::Remove => {
            let idx = rng.random_range(0..pairs.len());
            pairs.remove(idx);
        }
        ListOp::Add => {
            let idx = rng.random_range(0..=pairs.len());
            let pair = draw_pair(rng);
            pairs.insert(idx, pair);
        }
        ListOp::Modify => {
            let idx = rng.random_range(0..pairs.len());
            pairs[idx] = draw_pair(rng);
        }
    }
}

fn pick<'a, T, R: Rng>(options: &'a [T], rng: &mut R) -> Option<&'a T> {
    if options.is_empty() {
        None
    } else {
        Some(&options[rng.random_range(0..options.len())])
    }
}

/// Deb's bounded polynomial mutation with distribution index `eta`.
pub fn polynomial_mutation<R: Rng>(v: f64, lo: f64, hi: f64, eta: f64, rng: &mut R) -> f64 {
    if hi <= lo {
        return v;
    }
    let span = hi - lo;
    let u: f64 = rng.random();
    let mut_pow = 1.0 / (eta + 1.0);
    let delta_q = if u <= 0.5 {
        let delta1 = (v - lo) / span;
        let xy = 1.0 - delta1;
        let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
        val.powf(mut_pow) - 1.0
    } else {
        let delta2 = (hi - v) / span;
        let xy = 1.0 - delta2;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
        1.0 - val.powf(mut_pow)
    };
    (v + delta_q * span).clamp(lo, hi)
}

/// Weighted sampling without replacement: iterative renormalized draws,
/// falling back to uniform among the remainder when all remaining weights
/// are zero.
fn sample_weighted_without_replacement<R: Rng>(
    weights: &[f64],
    count: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..weights.len()).collect();
    let mut chosen = Vec::with_capacity(count);
    while chosen.len() < count && !remaining.is_empty() {
        let total: f64 = remaining.iter().map(|&i| weights[i].max(0.0)).sum();
        let pos = if total > 0.0 {
            let mut target = rng.random_range(0.0..total);
            let mut pos = remaining.len() - 1;
            for (r, &i) in remaining.iter().enumerate() {
                let w = weights[i].max(0.0);
                if target < w {
                    pos = r;
                    break;
                }
                target -= w;
            }
            pos
        } else {
            rng.random_range(0..remaining.len())
        };
        chosen.push(remaining.remove(pos));
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::scenario::FeatureDescriptor;
    use crate::testutil::{parking_like_schema, random_parking_config};

    #[test]
    fn equal_parents_yield_equal_children() {
        let schema = parking_like_schema();
        let p = random_parking_config(&schema, 1, 0);
        let mut rng = stream(2, "xover", 0);
        let (c1, c2) = single_point_crossover(&p, &p, &schema, &mut rng);
        assert_eq!(c1, p);
        assert_eq!(c2, p);
    }

    #[test]
    fn two_feature_cut_swaps_tails() {
        let schema = FeatureSchema::new(
            vec![
                FeatureDescriptor {
                    name: "a".into(),
                    kind: FeatureKind::Real { min: 0.0, max: 1.0 },
                },
                FeatureDescriptor {
                    name: "b".into(),
                    kind: FeatureKind::Real { min: 0.0, max: 1.0 },
                },
            ],
            vec![],
        )
        .unwrap();
        let pa = ScenarioConfig::new(
            vec![FeatureValue::Real(0.1), FeatureValue::Real(0.2)],
            &schema,
        )
        .unwrap();
        let pb = ScenarioConfig::new(
            vec![FeatureValue::Real(0.8), FeatureValue::Real(0.9)],
            &schema,
        )
        .unwrap();
        // with two features the only cut is 1
        let (c1, c2) = single_point_crossover(&pa, &pb, &schema, &mut stream(0, "x", 0));
        assert_eq!(c1.values(), &[FeatureValue::Real(0.1), FeatureValue::Real(0.9)]);
        assert_eq!(c2.values(), &[FeatureValue::Real(0.8), FeatureValue::Real(0.2)]);
    }

    #[test]
    fn children_always_valid_on_random_pairs() {
        let schema = parking_like_schema();
        let mut rng = stream(5, "xover-valid", 0);
        for i in 0..1000 {
            let p1 = random_parking_config(&schema, 100, i);
            let p2 = random_parking_config(&schema, 200, i);
            let (c1, c2) = single_point_crossover(&p1, &p2, &schema, &mut rng);
            assert!(c1.validate(&schema).is_ok(), "pair {i}");
            assert!(c2.validate(&schema).is_ok(), "pair {i}");
        }
    }

    #[test]
    fn single_feature_schema_always_mutates_it() {
        let schema = FeatureSchema::new(
            vec![FeatureDescriptor {
                name: "x".into(),
                kind: FeatureKind::Real { min: 0.0, max: 1.0 },
            }],
            vec![],
        )
        .unwrap();
        let config = ScenarioConfig::new(vec![FeatureValue::Real(0.5)], &schema).unwrap();
        let mut rng = stream(3, "mut", 0);
        let params = MutationParams::default();
        // saliency zero; the at-least-one rule still fires
        let mutated = mutate(&config, &[0.0], &schema, &params, &mut rng);
        assert!(mutated.validate(&schema).is_ok());
    }

    #[test]
    fn polynomial_mutation_respects_bounds() {
        let mut rng = stream(11, "poly", 0);
        for trial in 0..10_000 {
            // start at the lower bound: the worst case for underflow
            let v = polynomial_mutation(0.0, 0.0, 10.0, 20.0, &mut rng);
            assert!((0.0..=10.0).contains(&v), "trial {trial}: {v}");
        }
        for trial in 0..10_000 {
            let v = polynomial_mutation(10.0, 0.0, 10.0, 20.0, &mut rng);
            assert!((0.0..=10.0).contains(&v), "trial {trial}: {v}");
        }
    }

    #[test]
    fn empty_membership_list_can_only_grow() {
        let schema = FeatureSchema::new(
            vec![FeatureDescriptor {
                name: "items".into(),
                kind: FeatureKind::MembershipList {
                    domain_size: 5,
                    max_len: 3,
                },
            }],
            vec![],
        )
        .unwrap();
        let config =
            ScenarioConfig::new(vec![FeatureValue::MembershipList(vec![])], &schema).unwrap();
        let params = MutationParams::default();
        for seed in 0..50 {
            let mutated = mutate(
                &config,
                &[1.0],
                &schema,
                &params,
                &mut stream(seed, "grow", 0),
            );
            match &mutated.values()[0] {
                FeatureValue::MembershipList(items) => assert_eq!(items.len(), 1, "seed {seed}"),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn uniform_weights_select_features_uniformly() {
        // chi-squared against uniform over 4 features, one pick per call;
        // critical value for 3 dof at p = 0.01
        let weights = [0.25; 4];
        let mut rng = stream(17, "chi2", 0);
        let mut counts = [0u32; 4];
        let trials = 10_000;
        for _ in 0..trials {
            let chosen = sample_weighted_without_replacement(&weights, 1, &mut rng);
            counts[chosen[0]] += 1;
        }
        let expected = trials as f64 / 4.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 11.345, "chi2 = {chi2}, counts {counts:?}");
    }

    #[test]
    fn mutation_emits_valid_configs() {
        let schema = parking_like_schema();
        let params = MutationParams::default();
        let mut rng = stream(23, "mut-valid", 0);
        let uniform = vec![0.25; 4];
        for i in 0..500 {
            let config = random_parking_config(&schema, 300, i);
            let mutated = mutate(&config, &uniform, &schema, &params, &mut rng);
            assert!(mutated.validate(&schema).is_ok(), "config {i}");
        }
    }
}
