//! Nonparametric comparison statistics for per-seed campaign metrics.

use statrs::function::erf::erfc;

use super::AnalysisError;

/// Vargha-Delaney effect size: the probability that a draw from `a`
/// exceeds a draw from `b`, ties counting half.
pub fn vargha_delaney_a12(a: &[f64], b: &[f64]) -> Result<f64, AnalysisError> {
    if a.is_empty() || b.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let mut wins = 0.0f64;
    for &x in a {
        for &y in b {
            if x > y {
                wins += 1.0;
            } else if x == y {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (a.len() * b.len()) as f64)
}

/// Two-sided Wilcoxon rank-sum p-value via the normal approximation with
/// tie correction and continuity correction. Needs at least 5 observations
/// per sample.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<f64, AnalysisError> {
    const MIN_N: usize = 5;
    if a.len() < MIN_N || b.len() < MIN_N {
        return Err(AnalysisError::SampleTooSmall {
            needed: MIN_N,
            got: a.len().min(b.len()),
        });
    }
    let n1 = a.len() as f64;
    let n2 = b.len() as f64;
    let n = n1 + n2;

    // midranks over the pooled sample
    let mut pooled: Vec<(f64, usize)> = a
        .iter()
        .map(|&v| (v, 0usize))
        .chain(b.iter().map(|&v| (v, 1usize)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut ranks = vec![0.0f64; pooled.len()];
    let mut tie_correction = 0.0f64;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let midrank = (i + j + 1) as f64 / 2.0;
        for r in ranks.iter_mut().take(j).skip(i) {
            *r = midrank;
        }
        let t = (j - i) as f64;
        tie_correction += t * t * t - t;
        i = j;
    }

    let rank_sum: f64 = pooled
        .iter()
        .zip(&ranks)
        .filter(|((_, group), _)| *group == 0)
        .map(|(_, &r)| r)
        .sum();

    let mean = n1 * (n + 1.0) / 2.0;
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_correction / (n * (n - 1.0)));
    if variance <= 0.0 {
        // every pooled value tied: no evidence of a shift
        return Ok(1.0);
    }
    let diff = rank_sum - mean;
    // continuity correction shrinks |diff| by 0.5
    let z = (diff.abs() - 0.5).max(0.0) / variance.sqrt();
    let p = erfc(z / std::f64::consts::SQRT_2);
    Ok(p.min(1.0))
}

/// Linear-interpolation quantile of an unsorted sample.
fn quantile(values: &[f64], q: f64) -> f64 {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (h - lo as f64)
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Interquartile range, Q3 - Q1.
pub fn quartile_range(values: &[f64]) -> f64 {
    quantile(values, 0.75) - quantile(values, 0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn a12_hand_cases() {
        let same = [1.0, 2.0, 3.0];
        assert_eq!(vargha_delaney_a12(&same, &same).unwrap(), 0.5);
        assert_eq!(vargha_delaney_a12(&[4.0, 5.0], &[1.0, 2.0]).unwrap(), 1.0);
        // pairs (1,2) (1,3) (2,2) (2,3): one tie out of four
        assert_eq!(
            vargha_delaney_a12(&[1.0, 2.0], &[2.0, 3.0]).unwrap(),
            0.125
        );
    }

    #[test]
    fn a12_rejects_empty() {
        assert!(matches!(
            vargha_delaney_a12(&[], &[1.0]),
            Err(AnalysisError::EmptyInput)
        ));
    }

    #[test]
    fn wilcoxon_identical_samples_is_near_one() {
        let sample: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let p = wilcoxon_rank_sum(&sample, &sample).unwrap();
        assert!(p > 0.95, "p = {p}");
    }

    #[test]
    fn wilcoxon_clear_shift_is_significant() {
        let a: Vec<f64> = (0..20).map(|i| 1000.0 + i as f64).collect();
        let b: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let p = wilcoxon_rank_sum(&a, &b).unwrap();
        assert!(p < 0.001, "p = {p}");
    }

    #[test]
    fn wilcoxon_small_sample_is_rejected() {
        let three = [1.0, 2.0, 3.0];
        let five = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!(matches!(
            wilcoxon_rank_sum(&three, &five),
            Err(AnalysisError::SampleTooSmall { .. })
        ));
    }

    #[test]
    fn wilcoxon_all_tied_values() {
        let a = [2.0; 6];
        let b = [2.0; 8];
        assert_eq!(wilcoxon_rank_sum(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn median_and_iqr() {
        let values = [3.0, 1.0, 4.0, 1.0, 5.0];
        assert_eq!(median(&values), 3.0);
        assert_eq!(median(&[1.0, 2.0]), 1.5);
        assert_relative_eq!(quartile_range(&[1.0, 2.0, 3.0, 4.0]), 1.5, epsilon = 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// A12(a,b) + A12(b,a) = 1 and monotone-transform invariance.
            #[test]
            fn a12_symmetry_and_invariance(
                a in proptest::collection::vec(0.0f64..50.0, 1..12),
                b in proptest::collection::vec(0.0f64..50.0, 1..12),
            ) {
                let fwd = vargha_delaney_a12(&a, &b).unwrap();
                let rev = vargha_delaney_a12(&b, &a).unwrap();
                prop_assert!((fwd + rev - 1.0).abs() < 1e-12);
                // strictly increasing transform: 3x + 1
                let ta: Vec<f64> = a.iter().map(|v| 3.0 * v + 1.0).collect();
                let tb: Vec<f64> = b.iter().map(|v| 3.0 * v + 1.0).collect();
                let transformed = vargha_delaney_a12(&ta, &tb).unwrap();
                prop_assert!((fwd - transformed).abs() < 1e-12);
            }

            /// p-values are invariant under a joint rank-preserving transform.
            #[test]
            fn wilcoxon_rank_transform_invariance(
                a in proptest::collection::vec(0.0f64..50.0, 5..15),
                b in proptest::collection::vec(0.0f64..50.0, 5..15),
            ) {
                let p = wilcoxon_rank_sum(&a, &b).unwrap();
                let ta: Vec<f64> = a.iter().map(|v| (v + 1.0).ln()).collect();
                let tb: Vec<f64> = b.iter().map(|v| (v + 1.0).ln()).collect();
                let tp = wilcoxon_rank_sum(&ta, &tb).unwrap();
                prop_assert!((p - tp).abs() < 1e-9);
            }
        }
    }
}
