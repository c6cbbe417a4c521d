//! Representative selection from a non-dominated front.

use serde::{Deserialize, Serialize};

use crate::moea::Individual;

/// How the archived representative is picked from front 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionStrategy {
    /// Balanced trade-off: the knee point.
    Knee,
    /// The extreme failure-likelihood point (minimal f1).
    MaxO1,
}

impl std::fmt::Display for SelectionStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SelectionStrategy::Knee => write!(f, "knee"),
            SelectionStrategy::MaxO1 => write!(f, "max_o1"),
        }
    }
}

/// Index of the knee point: the front member with maximum perpendicular
/// distance to the line through the normalized extreme points.
///
/// Fronts of size <= 2 or with zero span in either objective fall back to
/// the best-f1 member. Ties break toward better f1, then insertion order.
pub fn knee_point(front: &[[f64; 2]]) -> usize {
    assert!(!front.is_empty(), "knee point needs a non-empty front");
    let min1 = front.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let max1 = front.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let min2 = front.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let max2 = front.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
    let span1 = max1 - min1;
    let span2 = max2 - min2;
    if front.len() <= 2 || span1 <= 0.0 || span2 <= 0.0 {
        return best_f1(front);
    }

    let normalized: Vec<[f64; 2]> = front
        .iter()
        .map(|p| [(p[0] - min1) / span1, (p[1] - min2) / span2])
        .collect();
    // line through the extreme points (first occurrence of each extreme)
    let a = normalized[argmin_f1(&normalized)];
    let b = normalized[argmax_f1(&normalized)];
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let norm = (dx * dx + dy * dy).sqrt();
    if norm <= 0.0 {
        return best_f1(front);
    }

    let mut best_idx = 0;
    let mut best_dist = f64::NEG_INFINITY;
    for (i, p) in normalized.iter().enumerate() {
        let dist = (dy * (p[0] - a[0]) - dx * (p[1] - a[1])).abs() / norm;
        let better = dist > best_dist + 1e-12
            || ((dist - best_dist).abs() <= 1e-12 && front[i][0] < front[best_idx][0]);
        if better {
            best_dist = dist;
            best_idx = i;
        }
    }
    best_idx
}

fn argmin_f1(points: &[[f64; 2]]) -> usize {
    let mut best = 0;
    for i in 1..points.len() {
        if points[i][0] < points[best][0] {
            best = i;
        }
    }
    best
}

fn argmax_f1(points: &[[f64; 2]]) -> usize {
    let mut best = 0;
    for i in 1..points.len() {
        if points[i][0] > points[best][0] {
            best = i;
        }
    }
    best
}

/// Minimal f1; ties break toward larger diversity (smaller f2), then
/// insertion order.
fn best_f1(front: &[[f64; 2]]) -> usize {
    let mut best = 0;
    for i in 1..front.len() {
        if front[i][0] < front[best][0]
            || (front[i][0] == front[best][0] && front[i][1] < front[best][1])
        {
            best = i;
        }
    }
    best
}

/// Picks the archived representative from the front per the strategy.
pub fn select_representative<'a>(
    front: &[&'a Individual],
    strategy: SelectionStrategy,
) -> &'a Individual {
    assert!(!front.is_empty(), "representative needs a non-empty front");
    let objectives: Vec<[f64; 2]> = front.iter().map(|i| i.objectives).collect();
    let idx = match strategy {
        SelectionStrategy::Knee => knee_point(&objectives),
        SelectionStrategy::MaxO1 => best_f1(&objectives),
    };
    front[idx]
}
