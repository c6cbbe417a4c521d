//! Toy parking environment: a kinematic agent steering toward a goal slot
//! in a two-row parking lot.
//!
//! Geometry: the first half of the lanes forms the top row at `y = +row_y`,
//! the second half the bottom row at `y = -row_y`, slots spaced
//! `lane_spacing` apart and centered on x = 0. The agent starts in the
//! region below or inside the bottom row, moves at constant speed, and
//! each step turns toward the goal bearing under a turn-rate limit. A
//! scenario fails when any sampled position comes within
//! `collision_radius` of an occupied slot center, or when the goal is not
//! reached within `max_steps`. Reaching a top-row goal from a low start
//! means threading the bottom row, so occupied bottom slots near the
//! crossing point cause en-route crashes; tight turn radii near the goal
//! produce orbit timeouts. Failures are geometric and multi-modal.

use std::f64::consts::PI;

use crate::analysis::{ExecutionRecord, Trajectory};
use crate::scenario::{
    FeatureDescriptor, FeatureKind, FeatureSchema, FeatureValue, ScenarioConfig, ScenarioError,
    SchemaConstraint,
};

/// Schema field names, matching the scenario JSON format.
pub const GOAL_LANE: &str = "goal_lane_idx";
pub const HEADING: &str = "heading_ego";
pub const PARKED_LANES: &str = "parked_vehicles_lane_indices";
pub const POSITION: &str = "position_ego";

#[derive(Debug, Clone)]
pub struct ToyParkingEnv {
    /// Total slots; the first half is the top row, the second the bottom.
    pub lane_count: usize,
    pub lane_spacing: f64,
    /// Row distance from the lot's horizontal midline.
    pub row_y: f64,
    pub collision_radius: f64,
    pub goal_tolerance: f64,
    pub max_steps: usize,
    pub step_length: f64,
    /// Max heading change per step, radians.
    pub turn_rate: f64,
    /// Virtual seconds per simulation step.
    pub step_duration: f64,
    /// Max number of occupied slots in a scenario.
    pub max_parked: usize,
    schema: FeatureSchema,
}

impl Default for ToyParkingEnv {
    fn default() -> Self {
        ToyParkingEnv::new(20, 10)
    }
}

impl ToyParkingEnv {
    pub fn new(lane_count: usize, max_parked: usize) -> Self {
        assert!(lane_count >= 2 && lane_count % 2 == 0, "two equal rows");
        let schema = parking_schema(lane_count, max_parked);
        ToyParkingEnv {
            lane_count,
            lane_spacing: 2.0,
            row_y: 5.0,
            collision_radius: 0.55,
            goal_tolerance: 0.4,
            max_steps: 60,
            step_length: 0.5,
            turn_rate: 0.25,
            step_duration: 0.1,
            max_parked,
            schema,
        }
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    /// Center of slot `lane`: lanes `0..lane_count/2` run left-to-right in
    /// the top row, the rest in the bottom row.
    pub fn lane_center(&self, lane: usize) -> [f64; 2] {
        let per_row = self.lane_count / 2;
        let (column, y) = if lane < per_row {
            (lane, self.row_y)
        } else {
            (lane - per_row, -self.row_y)
        };
        let offset = (per_row as f64 - 1.0) / 2.0;
        [(column as f64 - offset) * self.lane_spacing, y]
    }

    /// Runs the kinematic agent on one valid scenario.
    pub fn simulate(&self, config: &ScenarioConfig) -> Result<ExecutionRecord, ScenarioError> {
        config.validate(&self.schema)?;
        let goal = match config.value_by_name(GOAL_LANE, &self.schema) {
            Some(FeatureValue::Categorical(lane)) => *lane,
            _ => unreachable!("validated against the parking schema"),
        };
        let mut heading = match config.value_by_name(HEADING, &self.schema) {
            Some(FeatureValue::Real(h)) => *h,
            _ => unreachable!(),
        };
        let occupied: Vec<[f64; 2]> = match config.value_by_name(PARKED_LANES, &self.schema) {
            Some(FeatureValue::MembershipList(lanes)) => {
                lanes.iter().map(|&l| self.lane_center(l)).collect()
            }
            _ => unreachable!(),
        };
        let mut pos = match config.value_by_name(POSITION, &self.schema) {
            Some(FeatureValue::RealVector(p)) => [p[0], p[1]],
            _ => unreachable!(),
        };
        let goal_center = self.lane_center(goal);

        let mut trajectory = Vec::with_capacity(self.max_steps);
        let mut failed = true; // timeout unless we park
        let spawned_in_collision = occupied
            .iter()
            .any(|slot| distance(pos, *slot) < self.collision_radius);
        if spawned_in_collision {
            trajectory.push(pos);
            return Ok(ExecutionRecord {
                config: config.clone(),
                failed: true,
                trajectory: Trajectory::Planar(trajectory),
                evaluations: 0,
                wall_clock: self.step_duration,
            });
        }
        for _ in 0..self.max_steps {
            let bearing = (goal_center[1] - pos[1]).atan2(goal_center[0] - pos[0]);
            let turn = wrap_angle(bearing - heading).clamp(-self.turn_rate, self.turn_rate);
            heading = wrap_angle(heading + turn);
            pos = [
                pos[0] + self.step_length * heading.cos(),
                pos[1] + self.step_length * heading.sin(),
            ];
            trajectory.push(pos);

            let collided = occupied
                .iter()
                .any(|slot| distance(pos, *slot) < self.collision_radius);
            if collided {
                break;
            }
            if distance(pos, goal_center) <= self.goal_tolerance {
                failed = false;
                break;
            }
        }

        let steps = trajectory.len();
        Ok(ExecutionRecord {
            config: config.clone(),
            failed,
            trajectory: Trajectory::Planar(trajectory),
            evaluations: 0,
            wall_clock: steps as f64 * self.step_duration,
        })
    }
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Wraps an angle into (-pi, pi].
fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// The parking scenario schema: goal lane, initial heading, occupied slot
/// set, 2-D start position. The goal lane is never occupied.
pub fn parking_schema(lane_count: usize, max_parked: usize) -> FeatureSchema {
    FeatureSchema::new(
        vec![
            FeatureDescriptor {
                name: GOAL_LANE.into(),
                kind: FeatureKind::Categorical { count: lane_count },
            },
            FeatureDescriptor {
                name: HEADING.into(),
                kind: FeatureKind::Real { min: -PI, max: PI },
            },
            FeatureDescriptor {
                name: PARKED_LANES.into(),
                kind: FeatureKind::MembershipList {
                    domain_size: lane_count,
                    max_len: max_parked,
                },
            },
            FeatureDescriptor {
                name: POSITION.into(),
                kind: FeatureKind::RealVector {
                    min: vec![-10.0, -8.0],
                    max: vec![10.0, 0.0],
                },
            },
        ],
        vec![SchemaConstraint::ExcludeCategoryFromList {
            category_feature: GOAL_LANE.into(),
            list_feature: PARKED_LANES.into(),
        }],
    )
    .expect("parking schema is well-formed")
}
