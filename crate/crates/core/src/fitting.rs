//! Model fitting and fit comparison.
//!
//! Both model families are fit by ordinary least squares on log-transformed
//! counts, matching rank-frequency plot methodology: a geometric
//! distribution is a straight line on a log-frequency × rank plot, a power
//! law is a straight line on a log-frequency × log-rank plot. R² is
//! `1 − SS_res/SS_tot` of the OLS fit (equal to the squared Pearson
//! correlation for a simple regression), so it is invariant to the log base;
//! slopes are reported in base-2 logs.
//!
//! This is deliberately not maximum-likelihood power-law estimation — the
//! point is to quantify straightness of the plots the models predict.

use crate::dist::{ProbabilityVector, RankedDistribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod special;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least 3 points to fit, got {got}")]
    TooFewPoints { got: usize },
    #[error("all counts are equal; no variance to fit")]
    ZeroVariance,
    #[error("need at least 2 pairs for a paired test, got {got}")]
    TooFewPairs { got: usize },
    #[error("need top_n >= 3 ranks in both vectors (top_n={top_n}, sizes {len_a} and {len_b})")]
    TooFewRanks {
        top_n: usize,
        len_a: usize,
        len_b: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    Geometric,
    PowerLaw,
}

impl std::fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelFamily::Geometric => write!(f, "geometric"),
            ModelFamily::PowerLaw => write!(f, "power_law"),
        }
    }
}

/// OLS fit of one model family. `slope` and `intercept` are in base-2 log
/// units; for a geometric fit the slope is `log2` of the decay ratio, for a
/// power-law fit it is the (negated) exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelFamily,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl FitResult {
    /// Fitted log10 count at regressor value `x` (rank, or log2 rank),
    /// for plot-data emission on common log axes.
    pub fn fitted_log10(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x) * std::f64::consts::LOG10_2
    }
}

/// Simple least squares: returns (slope, intercept, r_squared) with R²
/// clamped into [0, 1] against float drift.
pub(crate) fn ols_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r_squared = (1.0 - ss_res / syy).clamp(0.0, 1.0);
    (slope, intercept, r_squared)
}

fn fit_log_counts(ranked: &RankedDistribution, model: ModelFamily) -> Result<FitResult, FitError> {
    let n = ranked.len();
    if n < 3 {
        return Err(FitError::TooFewPoints { got: n });
    }
    let first = ranked.items()[0].count;
    if ranked.counts().all(|c| c == first) {
        return Err(FitError::ZeroVariance);
    }
    let xs: Vec<f64> = ranked
        .items()
        .iter()
        .map(|item| match model {
            ModelFamily::Geometric => item.rank as f64,
            ModelFamily::PowerLaw => (item.rank as f64).log2(),
        })
        .collect();
    let ys: Vec<f64> = ranked.counts().map(|c| (c as f64).log2()).collect();
    let (slope, intercept, r_squared) = ols_line(&xs, &ys);
    Ok(FitResult {
        model,
        slope,
        intercept,
        r_squared,
        n_points: n,
    })
}

/// Fits log2(count) against rank. A straight line means the counts decay
/// geometrically; the slope is log2 of the decay ratio.
pub fn fit_geometric(ranked: &RankedDistribution) -> Result<FitResult, FitError> {
    fit_log_counts(ranked, ModelFamily::Geometric)
}

/// Fits log2(count) against log2(rank). A straight line means a power law;
/// the slope is the (negated) Zipf exponent.
pub fn fit_power_law(ranked: &RankedDistribution) -> Result<FitResult, FitError> {
    fit_log_counts(ranked, ModelFamily::PowerLaw)
}

/// Two-sided paired t-test result. With differences of zero variance the
/// test degenerates and sentinels are reported instead of failing: t = 0,
/// p = 1 when the mean difference is zero; t = ±∞, p = 0 otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedTest {
    pub t_statistic: f64,
    pub degrees_of_freedom: usize,
    pub mean_difference: f64,
    pub p_value: f64,
}

/// Paired two-sided t-test over `(a, b)` pairs with differences `d = a − b`:
/// `t = mean(d) / (sd(d)/√n)` with the n−1 sample standard deviation,
/// p-value from the Student-t CDF via the regularized incomplete beta.
pub fn compare_fits_paired(pairs: &[(f64, f64)]) -> Result<PairedTest, FitError> {
    let n = pairs.len();
    if n < 2 {
        return Err(FitError::TooFewPairs { got: n });
    }
    let diffs: Vec<f64> = pairs.iter().map(|&(a, b)| a - b).collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n as f64 - 1.0);
    let df = n - 1;
    if var == 0.0 {
        let (t, p) = if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (mean.signum() * f64::INFINITY, 0.0)
        };
        return Ok(PairedTest {
            t_statistic: t,
            degrees_of_freedom: df,
            mean_difference: mean,
            p_value: p,
        });
    }
    let t = mean / (var.sqrt() / (n as f64).sqrt());
    let p = special::student_t_two_sided_p(t, df as f64);
    Ok(PairedTest {
        t_statistic: t,
        degrees_of_freedom: df,
        mean_difference: mean,
        p_value: p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareSpace {
    Probability,
    LogProbability,
}

impl std::fmt::Display for CompareSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CompareSpace::Probability => write!(f, "probability"),
            CompareSpace::LogProbability => write!(f, "log_probability"),
        }
    }
}

/// Rank-profile comparison of two distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseComparison {
    pub r_squared: f64,
    pub n_ranks_compared: usize,
    pub normalization: CompareSpace,
}

/// Pairs mass at rank k in `a` with mass at rank k in `b` for k = 1..=top_n
/// and reports the squared Pearson correlation in the chosen space. Pairing
/// is by rank, not token — the comparison is between rank profiles, which is
/// what makes distributions over disjoint vocabularies comparable.
pub fn pointwise_compare(
    a: &ProbabilityVector,
    b: &ProbabilityVector,
    top_n: usize,
    space: CompareSpace,
) -> Result<PointwiseComparison, FitError> {
    if top_n < 3 || a.len() < top_n || b.len() < top_n {
        return Err(FitError::TooFewRanks {
            top_n,
            len_a: a.len(),
            len_b: b.len(),
        });
    }
    let (xs, ys) = paired_masses(a, b, top_n, space);
    let r_squared = pearson_r_squared(&xs, &ys);
    Ok(PointwiseComparison {
        r_squared,
        n_ranks_compared: top_n,
        normalization: space,
    })
}

pub(crate) fn paired_masses(
    a: &ProbabilityVector,
    b: &ProbabilityVector,
    top_n: usize,
    space: CompareSpace,
) -> (Vec<f64>, Vec<f64>) {
    let project = |m: f64| match space {
        CompareSpace::Probability => m,
        CompareSpace::LogProbability => m.log2(),
    };
    let xs = a.masses()[..top_n].iter().map(|&(_, m)| project(m)).collect();
    let ys = b.masses()[..top_n].iter().map(|&(_, m)| project(m)).collect();
    (xs, ys)
}

fn pearson_r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    ((sxy * sxy) / (sxx * syy)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{rank_distribution, normalize, FrequencyTable};
    use approx::assert_abs_diff_eq;

    fn ranked_from(counts: &[u64]) -> RankedDistribution {
        let t = FrequencyTable::from_counts(
            counts
                .iter()
                .enumerate()
                .map(|(i, &c)| (format!("t{i:04}"), c)),
        );
        rank_distribution(&t, 1, None, None).unwrap()
    }

    #[test]
    fn geometric_fit_on_exact_halvings() {
        // counts 1024 * 2^(1-k), k = 1..10
        let counts: Vec<u64> = (0..10).map(|k| 1024u64 >> k).collect();
        let fit = fit_geometric(&ranked_from(&counts)).unwrap();
        assert_abs_diff_eq!(fit.slope, -1.0, epsilon = 1e-12);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert_eq!(fit.n_points, 10);
        // model mismatch: the power-law fit must be strictly worse
        let pl = fit_power_law(&ranked_from(&counts)).unwrap();
        assert!(pl.r_squared < fit.r_squared);
    }

    #[test]
    fn zero_variance_rejected() {
        assert!(matches!(
            fit_geometric(&ranked_from(&[8, 8, 8])),
            Err(FitError::ZeroVariance)
        ));
    }

    #[test]
    fn too_few_points_rejected() {
        assert!(matches!(
            fit_geometric(&ranked_from(&[5, 3])),
            Err(FitError::TooFewPoints { got: 2 })
        ));
    }

    #[test]
    fn power_law_fit_on_zipf() {
        // counts ≈ 1e17 / k: relative rounding error ≤ 5e-16 over k = 1..100
        let scale = 1e17;
        let counts: Vec<u64> = (1..=100).map(|k| (scale / k as f64).round() as u64).collect();
        let fit = fit_power_law(&ranked_from(&counts)).unwrap();
        assert_abs_diff_eq!(fit.slope, -1.0, epsilon = 1e-9);
        assert!(fit.r_squared > 1.0 - 1e-9);
        let geom = fit_geometric(&ranked_from(&counts)).unwrap();
        assert!(geom.r_squared < fit.r_squared);
    }

    #[test]
    fn power_law_fit_on_exactly_proportional_zipf() {
        // lcm(1..=40)/k is an exact integer for every k, so the input is
        // exactly proportional to 1/k.
        let lcm = (1u128..=40).fold(1u128, |acc, k| {
            let g = gcd(acc, k);
            acc / g * k
        });
        let counts: Vec<u64> = (1u128..=40).map(|k| u64::try_from(lcm / k).unwrap()).collect();
        let fit = fit_power_law(&ranked_from(&counts)).unwrap();
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert_abs_diff_eq!(fit.slope, -1.0, epsilon = 1e-12);
    }

    fn gcd(a: u128, b: u128) -> u128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn scale_invariance() {
        let counts: Vec<u64> = vec![900, 500, 300, 170, 90, 41, 22, 13];
        let scaled: Vec<u64> = counts.iter().map(|c| c * 7).collect();
        let f1 = fit_geometric(&ranked_from(&counts)).unwrap();
        let f2 = fit_geometric(&ranked_from(&scaled)).unwrap();
        assert_abs_diff_eq!(f1.slope, f2.slope, epsilon = 1e-9);
        assert_abs_diff_eq!(f1.r_squared, f2.r_squared, epsilon = 1e-9);
        assert!((f1.intercept - f2.intercept).abs() > 1.0); // intercept shifts by log2 7
        let p1 = fit_power_law(&ranked_from(&counts)).unwrap();
        let p2 = fit_power_law(&ranked_from(&scaled)).unwrap();
        assert_abs_diff_eq!(p1.slope, p2.slope, epsilon = 1e-9);
        assert_abs_diff_eq!(p1.r_squared, p2.r_squared, epsilon = 1e-9);
    }

    #[test]
    fn r_squared_is_log_base_invariant() {
        let counts = [903u64, 520, 311, 160, 85, 44, 20, 11, 6];
        let ranks: Vec<f64> = (1..=counts.len()).map(|k| k as f64).collect();
        let mut r2s = Vec::new();
        for log in [f64::log2 as fn(f64) -> f64, f64::ln, f64::log10] {
            let ys: Vec<f64> = counts.iter().map(|&c| log(c as f64)).collect();
            let (_, _, r2) = ols_line(&ranks, &ys);
            r2s.push(r2);
        }
        assert_abs_diff_eq!(r2s[0], r2s[1], epsilon = 1e-9);
        assert_abs_diff_eq!(r2s[0], r2s[2], epsilon = 1e-9);
    }

    #[test]
    fn paired_identical_vectors_degenerate() {
        let pairs: Vec<(f64, f64)> = vec![(0.9, 0.9), (0.7, 0.7), (0.85, 0.85)];
        let t = compare_fits_paired(&pairs).unwrap();
        assert_eq!(t.t_statistic, 0.0);
        assert_eq!(t.p_value, 1.0);
        assert_eq!(t.degrees_of_freedom, 2);
    }

    #[test]
    fn paired_constant_nonzero_difference_is_infinite() {
        let pairs: Vec<(f64, f64)> = vec![(0.9, 0.8), (0.7, 0.6), (0.5, 0.4)];
        let t = compare_fits_paired(&pairs).unwrap();
        assert!(t.t_statistic.is_infinite() && t.t_statistic > 0.0);
        assert_eq!(t.p_value, 0.0);
    }

    #[test]
    fn paired_zero_mean_differences() {
        let pairs: Vec<(f64, f64)> = vec![(1.0, 0.0), (0.0, 1.0), (1.0, 0.0), (0.0, 1.0)];
        let t = compare_fits_paired(&pairs).unwrap();
        assert_eq!(t.t_statistic, 0.0);
        assert_abs_diff_eq!(t.p_value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn paired_hand_computed_case() {
        // d = 0.16 ± small jitter over 10 pairs; expected t computed
        // independently: mean(d) = 0.16, sd(d) = 0.011547005383792514,
        // t = 0.16 / (sd/sqrt(10)) = 43.81780460041329, df = 9.
        let d = [0.17, 0.15, 0.16, 0.18, 0.14, 0.16, 0.17, 0.15, 0.16, 0.16];
        let pairs: Vec<(f64, f64)> = d.iter().map(|&di| (0.99, 0.99 - di)).collect();
        let t = compare_fits_paired(&pairs).unwrap();
        assert_eq!(t.degrees_of_freedom, 9);
        assert_abs_diff_eq!(t.mean_difference, 0.16, epsilon = 1e-12);
        let expected_t = 43.81780460041329;
        assert!((t.t_statistic - expected_t).abs() / expected_t < 0.01);
        // independently computed two-sided p (scipy): 8.38892667210998e-12
        assert_abs_diff_eq!(t.p_value, 8.38892667210998e-12, epsilon = 1e-17);
    }

    #[test]
    fn paired_too_few() {
        assert!(matches!(
            compare_fits_paired(&[(0.5, 0.4)]),
            Err(FitError::TooFewPairs { got: 1 })
        ));
    }

    fn geometric_vector(r: f64, n: usize) -> ProbabilityVector {
        let norm: f64 = (0..n).map(|k| r.powi(k as i32)).sum();
        ProbabilityVector::from_masses((0..n).map(|k| r.powi(k as i32) / norm).collect()).unwrap()
    }

    #[test]
    fn pointwise_self_comparison() {
        let t = FrequencyTable::from_counts([("a", 50u64), ("b", 30), ("c", 12), ("d", 8)]);
        let p = normalize(&rank_distribution(&t, 1, None, None).unwrap());
        let cmp = pointwise_compare(&p, &p, 4, CompareSpace::Probability).unwrap();
        assert!(cmp.r_squared > 1.0 - 1e-12);
        assert_eq!(cmp.n_ranks_compared, 4);
    }

    #[test]
    fn pointwise_two_geometrics_log_space() {
        // log masses are both affine in rank, so log-space correlation is 1
        let a = geometric_vector(0.5, 30);
        let b = geometric_vector(0.8, 30);
        let cmp = pointwise_compare(&a, &b, 30, CompareSpace::LogProbability).unwrap();
        assert!(cmp.r_squared > 1.0 - 1e-9);
        // in probability space the relation is convex, not affine
        let prob = pointwise_compare(&a, &b, 30, CompareSpace::Probability).unwrap();
        assert!(prob.r_squared < cmp.r_squared);
    }

    #[test]
    fn pointwise_is_symmetric() {
        let a = geometric_vector(0.6, 20);
        let b = geometric_vector(0.9, 20);
        for space in [CompareSpace::Probability, CompareSpace::LogProbability] {
            let ab = pointwise_compare(&a, &b, 15, space).unwrap();
            let ba = pointwise_compare(&b, &a, 15, space).unwrap();
            assert_abs_diff_eq!(ab.r_squared, ba.r_squared, epsilon = 1e-12);
        }
    }

    #[test]
    fn pointwise_too_few_ranks() {
        let a = geometric_vector(0.5, 10);
        let b = geometric_vector(0.5, 4);
        assert!(matches!(
            pointwise_compare(&a, &b, 5, CompareSpace::Probability),
            Err(FitError::TooFewRanks { .. })
        ));
        assert!(matches!(
            pointwise_compare(&a, &b, 2, CompareSpace::Probability),
            Err(FitError::TooFewRanks { .. })
        ));
    }
}
