//! Adaptive geometry survival scoring.
//!
//! The splitting front is normalized by its own ideal point and the
//! intercepts of the hyperplane through its extreme points. The front's
//! geometry exponent `p` comes from the member closest to the normalized
//! diagonal; survival then balances diversity (sum of the two smallest
//! L_p distances to already-kept members) against proximity (the L_p norm
//! of the normalized objectives). Extreme points are kept first.

/// Scores for one front under the first-front procedure: extreme points get
/// +infinity, the rest are assigned diversity/proximity values in greedy
/// keep order. Higher is better.
pub fn age_moea_scores(front: &[[f64; 2]]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let (normalized, degenerate) = normalize_front(front);
    if degenerate {
        return vec![f64::INFINITY; n];
    }
    let p = geometry_exponent(&normalized);

    let mut scores = vec![0.0f64; n];
    let extreme_lo = argmax_by(&normalized, |v| v[0]);
    let extreme_hi = argmax_by(&normalized, |v| v[1]);
    scores[extreme_lo] = f64::INFINITY;
    scores[extreme_hi] = f64::INFINITY;

    let proximity: Vec<f64> = normalized.iter().map(|v| lp_norm(v, p)).collect();
    let mut considered: Vec<usize> = if extreme_lo == extreme_hi {
        vec![extreme_lo]
    } else {
        vec![extreme_lo, extreme_hi]
    };
    let mut remaining: Vec<usize> = (0..n).filter(|i| !considered.contains(i)).collect();

    while !remaining.is_empty() {
        let mut best: Option<(usize, f64)> = None;
        for &candidate in &remaining {
            let mut d1 = f64::INFINITY;
            let mut d2 = f64::INFINITY;
            for &kept in &considered {
                let d = lp_distance(&normalized[candidate], &normalized[kept], p);
                if d < d1 {
                    d2 = d1;
                    d1 = d;
                } else if d < d2 {
                    d2 = d;
                }
            }
            let diversity = if d2.is_finite() { d1 + d2 } else { d1 };
            let value = if proximity[candidate] > 0.0 {
                diversity / proximity[candidate]
            } else {
                f64::INFINITY
            };
            match best {
                Some((_, best_value)) if value <= best_value => {}
                _ => best = Some((candidate, value)),
            }
        }
        let (chosen, value) = best.unwrap();
        scores[chosen] = value;
        considered.push(chosen);
        remaining.retain(|&i| i != chosen);
    }
    scores
}

/// Proximity-only score for fronts that survive whole: 1 / (1 + ||f||_p) in
/// the front's own normalized space, so a higher key still means better.
pub fn age_moea_proximity_keys(front: &[[f64; 2]]) -> Vec<f64> {
    let n = front.len();
    if n == 0 {
        return Vec::new();
    }
    let (normalized, degenerate) = normalize_front(front);
    if degenerate {
        return vec![1.0; n];
    }
    let p = geometry_exponent(&normalized);
    normalized
        .iter()
        .map(|v| 1.0 / (1.0 + lp_norm(v, p)))
        .collect()
}

/// Translates by the front's ideal point and divides by the axis intercepts
/// of the line through the extreme points. Returns the normalized front and
/// whether the front was degenerate (all members identical).
fn normalize_front(front: &[[f64; 2]]) -> (Vec<[f64; 2]>, bool) {
    let ideal = [
        front.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min),
        front.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min),
    ];
    let translated: Vec<[f64; 2]> = front
        .iter()
        .map(|v| [v[0] - ideal[0], v[1] - ideal[1]])
        .collect();
    if translated.iter().all(|v| v[0] == 0.0 && v[1] == 0.0) {
        return (translated, true);
    }

    // extreme point per objective: the member with the largest translated
    // value in that objective
    let e0 = translated[argmax_by(&translated, |v| v[0])];
    let e1 = translated[argmax_by(&translated, |v| v[1])];

    // solve [e0; e1] * a = [1, 1]; intercepts are 1/a
    let det = e0[0] * e1[1] - e0[1] * e1[0];
    let mut intercepts = None;
    if det.abs() > 1e-12 {
        let a0 = (e1[1] - e0[1]) / det;
        let a1 = (e0[0] - e1[0]) / det;
        if a0 > 1e-12 && a1 > 1e-12 {
            intercepts = Some([1.0 / a0, 1.0 / a1]);
        }
    }
    // fallback: per-objective span
    let intercepts = intercepts.unwrap_or_else(|| {
        let span0 = translated.iter().map(|v| v[0]).fold(0.0f64, f64::max);
        let span1 = translated.iter().map(|v| v[1]).fold(0.0f64, f64::max);
        [span0.max(1e-12), span1.max(1e-12)]
    });

    let normalized = translated
        .iter()
        .map(|v| [v[0] / intercepts[0], v[1] / intercepts[1]])
        .collect();
    (normalized, false)
}

/// Estimates the front geometry exponent from the member closest to the
/// unit diagonal: p = ln(M) / (ln(M) - ln(prod(C))) for M objectives.
fn geometry_exponent(normalized: &[[f64; 2]]) -> f64 {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut central = normalized[0];
    let mut best = f64::INFINITY;
    for v in normalized {
        // squared perpendicular distance to the diagonal direction
        let along = (v[0] + v[1]) * inv_sqrt2;
        let perp = (v[0] * v[0] + v[1] * v[1]) - along * along;
        if perp < best {
            best = perp;
            central = *v;
        }
    }
    let product = central[0] * central[1];
    if product <= 0.0 {
        return 1.0;
    }
    let ln2 = std::f64::consts::LN_2;
    let p = ln2 / (ln2 - product.ln());
    if p.is_finite() && p > 0.0 {
        p
    } else {
        1.0
    }
}

fn lp_norm(v: &[f64; 2], p: f64) -> f64 {
    (v[0].abs().powf(p) + v[1].abs().powf(p)).powf(1.0 / p)
}

fn lp_distance(a: &[f64; 2], b: &[f64; 2], p: f64) -> f64 {
    lp_norm(&[a[0] - b[0], a[1] - b[1]], p)
}

fn argmax_by(front: &[[f64; 2]], key: impl Fn(&[f64; 2]) -> f64) -> usize {
    let mut best = 0;
    for i in 1..front.len() {
        if key(&front[i]) > key(&front[best]) {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_score_infinite() {
        let front = [[0.0, 1.0], [0.3, 0.45], [0.5, 0.3], [1.0, 0.0]];
        let scores = age_moea_scores(&front);
        assert_eq!(scores[0], f64::INFINITY);
        assert_eq!(scores[3], f64::INFINITY);
        assert!(scores[1].is_finite() && scores[1] > 0.0);
        assert!(scores[2].is_finite() && scores[2] > 0.0);
    }

    #[test]
    fn two_point_front_keeps_both() {
        assert_eq!(
            age_moea_scores(&[[0.0, 1.0], [1.0, 0.0]]),
            vec![f64::INFINITY, f64::INFINITY]
        );
    }

    #[test]
    fn identical_members_all_infinite() {
        let scores = age_moea_scores(&[[0.5, 0.5]; 4]);
        assert!(scores.iter().all(|s| s.is_infinite()));
    }

    #[test]
    fn crowded_cluster_scores_below_isolated_point() {
        // concave front with a tight cluster around (0.5, 0.52) and an
        // isolated member at a comparable distance from the ideal point
        let front = [
            [0.0, 1.0],
            [0.49, 0.53],
            [0.50, 0.52],
            [0.51, 0.51],
            [0.20, 0.80], // isolated, similar proximity
            [1.0, 0.0],
        ];
        let scores = age_moea_scores(&front);
        let cluster_best = scores[1].max(scores[2]).max(scores[3]);
        // the isolated point outranks at least the worst two cluster members
        let mut cluster: Vec<f64> = vec![scores[1], scores[2], scores[3]];
        cluster.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(
            scores[4] > cluster[0] && scores[4] > cluster[1],
            "isolated {} vs cluster {:?}",
            scores[4],
            cluster
        );
        // sanity: the cluster cannot dominate the isolated point's score
        assert!(cluster_best.is_finite());
    }
}
