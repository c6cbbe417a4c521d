//! Two-objective hypervolume and the stagnation rule built on it.

/// Area dominated by `front` relative to `reference`, in minimization
/// orientation: the union of the rectangles [f1, r1] x [f2, r2]. Points not
/// strictly below the reference in both objectives contribute nothing;
/// dominated points add no extra area.
pub fn hypervolume_2d(front: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let mut points: Vec<[f64; 2]> = front
        .iter()
        .copied()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .collect();
    // sweep in f1 order; for ties keep the better f2 first
    points.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap()
            .then(a[1].partial_cmp(&b[1]).unwrap())
    });
    let mut area = 0.0;
    let mut ceiling = reference[1];
    for p in points {
        if p[1] < ceiling {
            area += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    area
}

/// Stagnation rule over a per-generation hypervolume history: true once the
/// window is filled and the change across the last `n_last` generations
/// stays below `tol`.
pub fn detect_stagnation(history: &[f64], n_last: usize, tol: f64) -> bool {
    if history.len() < n_last + 1 {
        return false;
    }
    let g = history.len() - 1;
    (history[g] - history[g - n_last]).abs() < tol
}
