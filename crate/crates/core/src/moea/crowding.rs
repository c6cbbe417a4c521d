//! Crowding distance (Deb's definition) within one front.

/// Per-individual crowding distance. Boundary individuals per objective get
/// +infinity; interior ones accumulate the normalized gap between their
/// neighbours. A degenerate objective (max == min) contributes nothing.
pub fn crowding_distance(front: &[[f64; 2]]) -> Vec<f64> {
    let n = front.len();
    assert!(n > 0, "crowding distance needs a non-empty front");
    let mut distance = vec![0.0f64; n];
    for m in 0..2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| front[a][m].partial_cmp(&front[b][m]).unwrap());
        let min = front[order[0]][m];
        let max = front[order[n - 1]][m];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let span = max - min;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n.saturating_sub(1) {
            let gap = (front[order[w + 1]][m] - front[order[w - 1]][m]) / span;
            distance[order[w]] += gap;
        }
    }
    distance
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_of_three_gets_two() {
        let d = crowding_distance(&[[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]);
        assert_eq!(d[0], f64::INFINITY);
        assert_eq!(d[2], f64::INFINITY);
        assert_eq!(d[1], 2.0);
    }

    #[test]
    fn singleton_front_is_infinite() {
        assert_eq!(crowding_distance(&[[0.3, 0.7]]), vec![f64::INFINITY]);
    }

    #[test]
    fn two_individuals_are_both_boundaries() {
        let d = crowding_distance(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(d, vec![f64::INFINITY, f64::INFINITY]);
    }

    #[test]
    fn degenerate_span_contributes_zero() {
        // all f2 equal: only f1 contributes
        let d = crowding_distance(&[[0.0, 1.0], [0.25, 1.0], [1.0, 1.0]]);
        assert_eq!(d[1], 1.0);
    }
}
