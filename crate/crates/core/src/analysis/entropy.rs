//! Normalized Shannon entropy of a cluster assignment.

use super::AnalysisError;

/// Entropy of the label distribution over non-empty clusters, normalized by
/// ln(K) and scaled to a percentage. One cluster scores 0; equal-sized
/// clusters score 100.
pub fn entropy_percent(labels: &[usize]) -> Result<f64, AnalysisError> {
    if labels.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let max_label = *labels.iter().max().unwrap();
    let mut counts = vec![0usize; max_label + 1];
    for &l in labels {
        counts[l] += 1;
    }
    let counts: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    let k = counts.len();
    if k <= 1 {
        return Ok(0.0);
    }
    let n = labels.len() as f64;
    let entropy: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum();
    Ok(entropy / (k as f64).ln() * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn labels_from_counts(counts: &[usize]) -> Vec<usize> {
        counts
            .iter()
            .enumerate()
            .flat_map(|(label, &count)| std::iter::repeat_n(label, count))
            .collect()
    }

    #[test]
    fn uniform_two_clusters_score_100() {
        assert_relative_eq!(
            entropy_percent(&labels_from_counts(&[5, 5])).unwrap(),
            100.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn single_cluster_scores_zero() {
        assert_eq!(entropy_percent(&labels_from_counts(&[10])).unwrap(), 0.0);
    }

    #[test]
    fn skewed_counts_match_hand_value() {
        // -(0.8 ln 0.8 + 0.2 ln 0.2) / ln 2 * 100
        assert_relative_eq!(
            entropy_percent(&labels_from_counts(&[8, 2])).unwrap(),
            72.19280948873623,
            epsilon = 1e-10
        );
    }

    #[test]
    fn empty_labels_error() {
        assert!(matches!(entropy_percent(&[]), Err(AnalysisError::EmptyInput)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// Entropy lands in [0, 100]; 100 only for balanced clusters.
            #[test]
            fn entropy_is_bounded(counts in proptest::collection::vec(1usize..30, 1..6)) {
                let value = entropy_percent(&labels_from_counts(&counts)).unwrap();
                prop_assert!((0.0..=100.0 + 1e-9).contains(&value));
                let balanced = counts.iter().all(|&c| c == counts[0]);
                if counts.len() > 1 && balanced {
                    prop_assert!((value - 100.0).abs() < 1e-9);
                }
                if counts.len() == 1 {
                    prop_assert_eq!(value, 0.0);
                }
            }
        }
    }
}
