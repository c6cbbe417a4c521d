//! Ridge walker environment: a scalar-height stand-in for a balancing
//! agent, with a fully analytic failure region.
//!
//! ## Failure region
//!
//! The joint state is a point `x` in the cube [-1, 1]^d. Two disjoint
//! ellipsoidal shells define instability. For shell `i` with center `c_i`
//! and semi-axes `a`, let `rho_i(x) = ||(x - c_i) / a||_2`; its shell depth
//! is `min(rho_i - r_lo, r_hi - rho_i)` (positive strictly inside the
//! shell band). The height recurrence drops
//! `gain * depth * g_i(t)` per step, with a mode-specific modulation
//! `g_i(t) > 0`, so the height is monotone and crosses the fall threshold
//! within `max_steps` exactly when
//!
//! `depth(x) > (h0 - threshold) / (gain * sum_t g_i(t))`.
//!
//! The failure region is therefore the union of the two shell bands shrunk
//! by that analytically known margin, and its volume is
//! `V_d * prod(a) * ((r_hi - m_i)^d - (r_lo + m_i)^d)` summed over shells,
//! with `V_d` the unit-ball volume. The two modulation profiles (steady
//! oscillation vs accelerating drop) plant two distinct trace shapes for
//! clustering.

use std::f64::consts::PI;

use crate::analysis::{ExecutionRecord, Trajectory};
use crate::scenario::{
    FeatureDescriptor, FeatureKind, FeatureSchema, FeatureValue, ScenarioConfig, ScenarioError,
};

pub const JOINT_STATE: &str = "joint_state";

/// Shell band in normalized radius.
const SHELL_R_LO: f64 = 0.55;
const SHELL_R_HI: f64 = 1.0;
/// First-axis centers of the two shells.
const SHELL_CENTERS: [f64; 2] = [-0.5, 0.5];

#[derive(Debug, Clone)]
pub struct RidgeWalkerEnv {
    pub joint_dims: usize,
    pub fall_threshold: f64,
    pub initial_height: f64,
    pub max_steps: usize,
    pub descent_gain: f64,
    pub step_duration: f64,
    schema: FeatureSchema,
}

impl Default for RidgeWalkerEnv {
    fn default() -> Self {
        RidgeWalkerEnv::new(3)
    }
}

impl RidgeWalkerEnv {
    pub fn new(joint_dims: usize) -> Self {
        assert!(joint_dims >= 1);
        let schema = walker_schema(joint_dims);
        RidgeWalkerEnv {
            joint_dims,
            fall_threshold: 0.2,
            initial_height: 1.0,
            max_steps: 50,
            descent_gain: 1.6,
            step_duration: 0.1,
            schema,
        }
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    fn semi_axes(&self) -> Vec<f64> {
        (0..self.joint_dims)
            .map(|j| if j < 2 { 0.45 } else { 0.40 })
            .collect()
    }

    /// Shell depths at a joint state; positive inside a shell band.
    fn shell_depths(&self, x: &[f64]) -> [f64; 2] {
        let axes = self.semi_axes();
        let mut depths = [f64::NEG_INFINITY; 2];
        for (shell, &center_x) in SHELL_CENTERS.iter().enumerate() {
            let mut rho_sq = 0.0;
            for (j, (&v, &a)) in x.iter().zip(&axes).enumerate() {
                let centered = if j == 0 { v - center_x } else { v };
                rho_sq += (centered / a) * (centered / a);
            }
            let rho = rho_sq.sqrt();
            depths[shell] = (rho - SHELL_R_LO).min(SHELL_R_HI - rho);
        }
        depths
    }

    /// Modulation profile of each failure mode; strictly positive so the
    /// height stays monotone.
    fn modulation(mode: usize, t: usize) -> f64 {
        match mode {
            0 => 1.0 + 0.9 * (2.0 * PI * t as f64 / 10.0).sin(),
            _ => 2.0 * t as f64 / 50.0,
        }
    }

    fn modulation_sum(&self, mode: usize) -> f64 {
        (1..=self.max_steps).map(|t| Self::modulation(mode, t)).sum()
    }

    /// The analytic depth margin below which a shell point still survives
    /// the full episode.
    pub fn depth_margin(&self, mode: usize) -> f64 {
        (self.initial_height - self.fall_threshold)
            / (self.descent_gain * self.modulation_sum(mode))
    }

    /// Whether a joint state lies in the analytic failure region.
    pub fn in_failure_region(&self, x: &[f64]) -> bool {
        let depths = self.shell_depths(x);
        (0..2).any(|mode| depths[mode] > self.depth_margin(mode))
    }

    /// Exact failure-region volume fraction of the configuration cube.
    pub fn failure_volume_fraction(&self) -> f64 {
        let d = self.joint_dims;
        let axes_product: f64 = self.semi_axes().iter().product();
        let cube = 2.0f64.powi(d as i32);
        (0..2)
            .map(|mode| {
                let margin = self.depth_margin(mode);
                let outer = (SHELL_R_HI - margin).max(0.0).powi(d as i32);
                let inner = (SHELL_R_LO + margin).min(SHELL_R_HI).powi(d as i32);
                unit_ball_volume(d) * axes_product * (outer - inner).max(0.0)
            })
            .sum::<f64>()
            / cube
    }

    /// Runs the height recurrence on one valid joint state.
    pub fn simulate(&self, config: &ScenarioConfig) -> Result<ExecutionRecord, ScenarioError> {
        config.validate(&self.schema)?;
        let x = match config.value_by_name(JOINT_STATE, &self.schema) {
            Some(FeatureValue::RealVector(v)) => v.clone(),
            _ => unreachable!("validated against the walker schema"),
        };
        let depths = self.shell_depths(&x);
        let (mode, depth) = if depths[0] >= depths[1] {
            (0, depths[0])
        } else {
            (1, depths[1])
        };
        let drop_scale = self.descent_gain * depth.max(0.0);

        let mut height = self.initial_height;
        let mut heights = Vec::with_capacity(self.max_steps);
        let mut failed = false;
        for t in 1..=self.max_steps {
            height -= drop_scale * Self::modulation(mode, t);
            heights.push(height);
            if height < self.fall_threshold {
                failed = true;
                break;
            }
        }

        let steps = heights.len();
        Ok(ExecutionRecord {
            config: config.clone(),
            failed,
            trajectory: Trajectory::Scalar(heights),
            evaluations: 0,
            wall_clock: steps as f64 * self.step_duration,
        })
    }
}

/// Volume of the unit d-ball via the two-step recurrence.
fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

/// The walker schema: one bounded joint-state vector.
pub fn walker_schema(joint_dims: usize) -> FeatureSchema {
    FeatureSchema::new(
        vec![FeatureDescriptor {
            name: JOINT_STATE.into(),
            kind: FeatureKind::RealVector {
                min: vec![-1.0; joint_dims],
                max: vec![1.0; joint_dims],
            },
        }],
        vec![],
    )
    .expect("walker schema is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    fn state(env: &RidgeWalkerEnv, x: Vec<f64>) -> ScenarioConfig {
        ScenarioConfig::new(vec![FeatureValue::RealVector(x)], env.schema()).unwrap()
    }

    #[test]
    fn origin_is_stable_by_construction() {
        let env = RidgeWalkerEnv::default();
        let record = env.simulate(&state(&env, vec![0.0, 0.0, 0.0])).unwrap();
        assert!(!record.failed);
        assert_eq!(record.trajectory.len(), env.max_steps);
    }

    #[test]
    fn shell_interior_point_falls() {
        let env = RidgeWalkerEnv::default();
        // mid-band of the first shell: rho = 0.775 along the first axis
        let x = vec![-0.5 + 0.775 * 0.45, 0.0, 0.0];
        assert!(env.in_failure_region(&x));
        let record = env.simulate(&state(&env, x)).unwrap();
        assert!(record.failed);
    }

    #[test]
    fn labels_agree_with_the_analytic_region() {
        let env = RidgeWalkerEnv::default();
        let mut rng = stream(8, "walker-region", 0);
        for _ in 0..2000 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let record = env.simulate(&state(&env, x.clone())).unwrap();
            assert_eq!(record.failed, env.in_failure_region(&x), "x = {x:?}");
        }
    }

    #[test]
    fn measured_rate_matches_analytic_volume() {
        let env = RidgeWalkerEnv::default();
        let expected = env.failure_volume_fraction();
        assert!(expected > 0.01, "region should not be negligible: {expected}");
        let mut rng = stream(21, "walker-volume", 0);
        let samples = 100_000;
        let mut failures = 0u32;
        for _ in 0..samples {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            if env.simulate(&state(&env, x)).unwrap().failed {
                failures += 1;
            }
        }
        let measured = failures as f64 / samples as f64;
        let relative = (measured - expected).abs() / expected;
        assert!(
            relative <= 0.02,
            "measured {measured}, analytic {expected}, rel {relative}"
        );
    }

    #[test]
    fn the_two_modes_have_distinct_trace_shapes() {
        let env = RidgeWalkerEnv::default();
        // equal depth in each shell's band, one per mode
        let depth_point = |center: f64| vec![center + 0.775 * 0.45, 0.0, 0.0];
        let a = env.simulate(&state(&env, depth_point(-0.5))).unwrap();
        let b = env.simulate(&state(&env, depth_point(0.5))).unwrap();
        assert!(a.failed && b.failed);
        assert_ne!(a.trajectory, b.trajectory);
    }

    #[test]
    fn ball_volume_recurrence_matches_known_values() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-12);
    }
}
