//! Smoothing-parameter selection for the extrapolation estimator.
//!
//! Only the first level `lambda_1` matters much; the grid is then `s`
//! equally spaced levels spanning `[lambda_1, lambda_1 + span]` (defaults
//! `s = 50`, `span = 3`). Two selectors are provided:
//!
//! * [`select_lambda1_mise`] minimizes the asymptotic integrated variance,
//!   which up to a data-independent constant is the quadratic form
//!   `c S c'` of the extrapolation plan — a data-free criterion;
//! * [`select_lambda1_rot`] matches the estimator's variable bandwidth
//!   `mean_sigma * sqrt(lambda_1)` to an error-inflated rule-of-thumb
//!   bandwidth of the observed data.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::model::ContaminatedSample;
use crate::simex::{build_plan, LambdaGrid};

/// Rule-of-thumb multiplier from Silverman's reference rule.
pub const SILVERMAN_A0: f64 = 0.9;

/// Rule-of-thumb multiplier from Scott's variant; the default here.
pub const SCOTT_A0: f64 = 1.06;

/// Search configuration for the variance-minimizing selector plus the grid
/// geometry shared by both selectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSearchSpec {
    /// Lower end of the `lambda_1` search interval.
    pub lower: f64,
    /// Upper end of the search interval.
    pub upper: f64,
    /// Absolute tolerance on the located minimizer.
    pub tol: f64,
    /// Number of levels in the grid.
    pub s: usize,
    /// Width `lambda_s - lambda_1` of the grid.
    pub span: f64,
}

impl LambdaSearchSpec {
    /// Validate a configuration.
    pub fn new(lower: f64, upper: f64, tol: f64, s: usize, span: f64) -> Result<Self> {
        if lower <= 0.0 || upper <= lower || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidSearchBounds { lower, upper });
        }
        if tol <= 0.0 || !tol.is_finite() {
            return Err(Error::NonPositiveParameter {
                what: "tol",
                value: tol,
            });
        }
        if s < 3 {
            return Err(Error::LambdaGridTooShort { len: s });
        }
        if span <= 0.0 || !span.is_finite() {
            return Err(Error::NonPositiveParameter {
                what: "span",
                value: span,
            });
        }
        Ok(LambdaSearchSpec {
            lower,
            upper,
            tol,
            s,
            span,
        })
    }
}

impl Default for LambdaSearchSpec {
    /// Bounds `[1e-3, 20]`, tolerance `1e-4`, 50 levels spanning 3.
    fn default() -> Self {
        LambdaSearchSpec {
            lower: 1e-3,
            upper: 20.0,
            tol: 1e-4,
            s: 50,
            span: 3.0,
        }
    }
}

/// `s` equally spaced levels from `lambda_1` to `lambda_1 + span` inclusive.
pub fn build_lambda_grid(lambda1: f64, spec: &LambdaSearchSpec) -> Result<LambdaGrid> {
    if lambda1 <= 0.0 || !lambda1.is_finite() {
        return Err(Error::LambdaNotPositive { value: lambda1 });
    }
    let step = spec.span / (spec.s - 1) as f64;
    let lambdas: Vec<f64> = (0..spec.s).map(|i| lambda1 + step * i as f64).collect();
    LambdaGrid::new(lambdas)
}

/// The data-free risk criterion `c S c'` for the grid starting at `lambda1`.
///
/// Positive for every valid grid; a non-positive value is reported as an
/// error rather than silently returned.
pub fn mise_objective(lambda1: f64, spec: &LambdaSearchSpec) -> Result<f64> {
    let grid = build_lambda_grid(lambda1, spec)?;
    let plan = build_plan(&grid)?;
    let value = plan.variance_form();
    if value <= 0.0 || !value.is_finite() {
        return Err(Error::NonPositiveObjective { lambda1, value });
    }
    Ok(value)
}

/// Number of coarse-scan points bracketing the golden-section refinement.
const SCAN_POINTS: usize = 64;

/// Minimize [`mise_objective`] over the closed interval
/// `[spec.lower, spec.upper]`, boundary included.
///
/// A 64-point scan brackets the minimum, golden-section search refines the
/// bracket to `spec.tol`, and the best evaluated point `(lambda1, value)` is
/// returned. Note that with the `lambda_s = lambda_1 + span` grid rule the
/// criterion is monotone decreasing in `lambda_1` (smoothing more always
/// lowers variance, and the criterion carries no bias term), so the bounded
/// minimizer typically sits on the upper bound; [`select_lambda1_mise`]
/// turns that into the inconclusive-selection report.
pub fn minimize_mise_objective(spec: &LambdaSearchSpec) -> Result<(f64, f64)> {
    let spec = LambdaSearchSpec::new(spec.lower, spec.upper, spec.tol, spec.s, spec.span)?;
    let step = (spec.upper - spec.lower) / (SCAN_POINTS - 1) as f64;

    let mut best_x = spec.lower;
    let mut best_f = f64::INFINITY;
    let mut best_idx = 0;
    for i in 0..SCAN_POINTS {
        let x = spec.lower + step * i as f64;
        let f = mise_objective(x, &spec)?;
        if f < best_f {
            best_f = f;
            best_x = x;
            best_idx = i;
        }
    }

    let mut a = spec.lower + step * best_idx.saturating_sub(1) as f64;
    let mut b = (spec.lower + step * (best_idx + 1) as f64).min(spec.upper);

    // Golden-section; keeps the best evaluated point so that shrinking the
    // tolerance can only improve the verified objective value.
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = mise_objective(x1, &spec)?;
    let mut f2 = mise_objective(x2, &spec)?;
    while b - a > spec.tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = mise_objective(x1, &spec)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = mise_objective(x2, &spec)?;
        }
        let (x, f) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        if f < best_f {
            best_f = f;
            best_x = x;
        }
    }
    Ok((best_x, best_f))
}

/// The variance-minimizing first level, when one exists inside the bounds.
///
/// A minimizer pinned to either boundary means the bounds clipped the search
/// and the selection is inconclusive; that is reported as
/// [`Error::BoundaryMinimum`] (with this criterion's monotone shape it is
/// the expected outcome — widening the bounds only moves the pin).
pub fn select_lambda1_mise(spec: &LambdaSearchSpec) -> Result<f64> {
    let (best_x, _) = minimize_mise_objective(spec)?;
    if best_x - spec.lower <= spec.tol || spec.upper - best_x <= spec.tol {
        return Err(Error::BoundaryMinimum {
            lambda1: best_x,
            lower: spec.lower,
            upper: spec.upper,
        });
    }
    Ok(best_x)
}

/// Sample standard deviation (n - 1 denominator).
pub fn sample_sd(data: &[f64]) -> f64 {
    let n = data.len();
    if n < 2 {
        return 0.0;
    }
    let mean = data.iter().sum::<f64>() / n as f64;
    let ss: f64 = data.iter().map(|x| (x - mean) * (x - mean)).sum();
    math::sqrt(ss / (n - 1) as f64)
}

/// Quantile with linear interpolation between order statistics.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let idx = p * (n - 1) as f64;
    let lo = math::floor(idx) as usize;
    let frac = idx - lo as f64;
    if lo + 1 >= n {
        sorted[n - 1]
    } else {
        sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
    }
}

/// Interquartile range with interpolated quartiles.
pub fn interquartile_range(data: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = data.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite data"));
    quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25)
}

/// Rule-of-thumb bandwidth from precomputed summary statistics:
/// `a0 * min(sd, iqr / 1.34) * n^(-1/5)`, falling back to the standard
/// deviation when the interquartile range is degenerate.
pub fn rot_bandwidth_from_stats(a0: f64, sd: f64, iqr: f64, n: usize) -> Result<f64> {
    if a0 <= 0.0 || !a0.is_finite() {
        return Err(Error::NonPositiveParameter {
            what: "a0",
            value: a0,
        });
    }
    if n < 2 {
        return Err(Error::TooFewObservations { n, min: 2 });
    }
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    if spread <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    Ok(a0 * spread * math::powf(n as f64, -0.2))
}

/// Rule-of-thumb bandwidth of a data vector.
pub fn rot_bandwidth(data: &[f64], a0: f64) -> Result<f64> {
    rot_bandwidth_from_stats(a0, sample_sd(data), interquartile_range(data), data.len())
}

/// Rule-of-thumb bandwidth of the observed values of a sample.
pub fn rot_bandwidth_y(sample: &ContaminatedSample, a0: f64) -> Result<f64> {
    rot_bandwidth(sample.y(), a0)
}

/// The algebra of the rule-of-thumb level: solve
/// `mean_sigma * sqrt(lambda_1) = c0 * h` for `lambda_1`, where
/// `c0 = sqrt(sd_y^2 + mean_sigma^2) / sd_y`, giving
/// `lambda_1 = (sd_y^2 + mean_sigma^2) / (sd_y^2 * mean_sigma^2) * h^2`.
pub fn lambda1_from_parts(sd_y: f64, mean_sigma: f64, h: f64) -> f64 {
    let sy2 = sd_y * sd_y;
    let su2 = mean_sigma * mean_sigma;
    (sy2 + su2) / (sy2 * su2) * h * h
}

/// Rule-of-thumb first level: the `lambda_1` whose variable bandwidth
/// `mean_sigma * sqrt(lambda_1)` equals the inflated rule-of-thumb
/// bandwidth `c0 * h_rot` of the observed data.
pub fn select_lambda1_rot(sample: &ContaminatedSample, a0: f64) -> Result<f64> {
    let h = rot_bandwidth_y(sample, a0)?;
    Ok(lambda1_from_parts(
        sample_sd(sample.y()),
        sample.mean_sigma(),
        h,
    ))
}

/// Variant of [`select_lambda1_rot`] that scales linearly in the
/// rule-of-thumb bandwidth instead of quadratically.
///
/// The defining bandwidth equation squares `h`; this form is kept for
/// comparison with the unsquared convention and is dimensionally
/// inconsistent (the level is no longer invariant under rescaling the
/// data). Prefer [`select_lambda1_rot`].
pub fn select_lambda1_rot_unsquared(sample: &ContaminatedSample, a0: f64) -> Result<f64> {
    let h = rot_bandwidth_y(sample, a0)?;
    let sy = sample_sd(sample.y());
    let sy2 = sy * sy;
    let su2 = sample.mean_sigma() * sample.mean_sigma();
    Ok((sy2 + su2) / (sy2 * su2) * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_construction_defaults() {
        let spec = LambdaSearchSpec::default();
        let grid = build_lambda_grid(0.5, &spec).unwrap();
        assert_eq!(grid.len(), 50);
        assert_abs_diff_eq!(grid.values()[49], 3.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            grid.values()[1] - grid.values()[0],
            3.0 / 49.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            grid.values()[1] - grid.values()[0],
            0.061224,
            epsilon = 1e-6
        );
    }

    #[test]
    fn grid_three_levels() {
        let spec = LambdaSearchSpec::new(1e-3, 20.0, 1e-4, 3, 2.0).unwrap();
        let grid = build_lambda_grid(1.0, &spec).unwrap();
        assert_eq!(grid.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn grid_strictly_increasing_for_random_inputs() {
        let mut rng = Stream::from_seed(3);
        for _ in 0..100 {
            let l1 = rng.uniform_in(1e-3, 10.0);
            let s = 3 + (rng.next_u64() % 60) as usize;
            let span = rng.uniform_in(0.1, 10.0);
            let spec = LambdaSearchSpec::new(1e-3, 20.0, 1e-4, s, span).unwrap();
            let grid = build_lambda_grid(l1, &spec).unwrap();
            for w in grid.values().windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn objective_for_three_known_levels() {
        // c = (6, -8, 3) and S entries 1/sqrt(l + m) give the closed value.
        let spec = LambdaSearchSpec::new(1e-3, 20.0, 1e-4, 3, 2.0).unwrap();
        let c = [6.0_f64, -8.0, 3.0];
        let l = [1.0_f64, 2.0, 3.0];
        let mut expected = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                expected += c[i] * c[j] / (l[i] + l[j]).sqrt();
            }
        }
        let got = mise_objective(1.0, &spec).unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-9);
    }

    #[test]
    fn objective_is_continuous_in_lambda1() {
        let spec = LambdaSearchSpec::default();
        let mut x = 0.05;
        while x < 10.0 {
            let a = mise_objective(x, &spec).unwrap();
            let b = mise_objective(x + 1e-9, &spec).unwrap();
            assert!((a - b).abs() < 1e-3, "jump at {x}: {a} vs {b}");
            x += 0.37;
        }
    }

    #[test]
    fn bounded_minimizer_beats_a_fine_scan() {
        let spec = LambdaSearchSpec::default();
        let (best, best_f) = minimize_mise_objective(&spec).unwrap();
        assert!((spec.lower..=spec.upper).contains(&best));
        let mut scan_min = f64::INFINITY;
        for i in 0..1000 {
            let x = spec.lower + (spec.upper - spec.lower) * i as f64 / 999.0;
            scan_min = scan_min.min(mise_objective(x, &spec).unwrap());
        }
        assert!(best_f <= scan_min * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn bounded_minimizer_improves_with_tolerance() {
        let mut prev = f64::INFINITY;
        for tol in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
            let spec = LambdaSearchSpec::new(1e-3, 20.0, tol, 50, 3.0).unwrap();
            let (_, f) = minimize_mise_objective(&spec).unwrap();
            assert!(f <= prev + 1e-15);
            prev = f;
        }
    }

    #[test]
    fn objective_is_monotone_decreasing_so_selection_pins_to_boundary() {
        // Smoothing more always lowers the variance criterion (it has no
        // bias term), so the interior-minimum selector must report the pin.
        let spec = LambdaSearchSpec::default();
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let x = spec.lower + (spec.upper - spec.lower) * i as f64 / 39.0;
            let f = mise_objective(x, &spec).unwrap();
            assert!(f < prev);
            prev = f;
        }
        assert!(matches!(
            select_lambda1_mise(&spec),
            Err(Error::BoundaryMinimum { .. })
        ));
        // A deliberately tiny upper bound pins the search the same way.
        let pinned = LambdaSearchSpec::new(1e-3, 2e-3, 1e-4, 50, 3.0).unwrap();
        assert!(matches!(
            select_lambda1_mise(&pinned),
            Err(Error::BoundaryMinimum { .. })
        ));
    }

    #[test]
    fn rot_bandwidth_hand_example() {
        let h = rot_bandwidth_from_stats(1.06, 1.0, 1.34, 100).unwrap();
        assert_abs_diff_eq!(h, 0.42199, epsilon = 1e-5);
        // min branch: a huge sd defers to the interquartile range.
        let h2 = rot_bandwidth_from_stats(1.06, 10.0, 1.34, 100).unwrap();
        assert_abs_diff_eq!(h2, h, epsilon = 1e-12);
        // Multiplier scales linearly.
        let h3 = rot_bandwidth_from_stats(0.9, 1.0, 1.34, 100).unwrap();
        assert_abs_diff_eq!(h3, h * 0.9 / 1.06, epsilon = 1e-12);
    }

    #[test]
    fn rot_bandwidth_rejects_degenerate_data() {
        assert_eq!(
            rot_bandwidth(&[1.0, 1.0, 1.0, 1.0], 1.06),
            Err(Error::DegenerateSample)
        );
        assert!(rot_bandwidth(&[1.0], 1.06).is_err());
        assert!(rot_bandwidth_from_stats(0.0, 1.0, 1.0, 10).is_err());
    }

    #[test]
    fn lambda1_hand_example() {
        assert_abs_diff_eq!(lambda1_from_parts(1.0, 0.5, 0.3), 0.45, epsilon = 1e-12);
    }

    #[test]
    fn rot_level_satisfies_its_defining_equation() {
        let mut rng = Stream::from_seed(23);
        for _ in 0..100 {
            let n = 10 + (rng.next_u64() % 100) as usize;
            let y: Vec<f64> = (0..n)
                .map(|_| rng.normal() * rng.uniform_in(0.5, 3.0))
                .collect();
            let sigma: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.05, 1.0)).collect();
            let sample = ContaminatedSample::new(y, sigma).unwrap();
            let lambda1 = select_lambda1_rot(&sample, SCOTT_A0).unwrap();
            let h = rot_bandwidth_y(&sample, SCOTT_A0).unwrap();
            let sy = sample_sd(sample.y());
            let su = sample.mean_sigma();
            let c0 = (sy * sy + su * su).sqrt() / sy;
            assert_abs_diff_eq!(su * lambda1.sqrt(), c0 * h, epsilon = 1e-12);
            assert!(lambda1 > 0.0);
        }
    }

    #[test]
    fn rot_level_is_scale_invariant() {
        let mut rng = Stream::from_seed(29);
        for _ in 0..100 {
            let n = 8 + (rng.next_u64() % 50) as usize;
            let y: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            let sigma: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.1, 0.8)).collect();
            let k = rng.uniform_in(0.1, 25.0);
            let scaled_y: Vec<f64> = y.iter().map(|v| v * k).collect();
            let scaled_sigma: Vec<f64> = sigma.iter().map(|v| v * k).collect();
            let a =
                select_lambda1_rot(&ContaminatedSample::new(y, sigma).unwrap(), SCOTT_A0).unwrap();
            let b = select_lambda1_rot(
                &ContaminatedSample::new(scaled_y, scaled_sigma).unwrap(),
                SCOTT_A0,
            )
            .unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn unsquared_variant_relates_by_one_factor_of_h() {
        let y = vec![0.3, -1.2, 0.8, 2.1, -0.4, 1.5];
        let sample = ContaminatedSample::with_common_sigma(y, 0.5).unwrap();
        let h = rot_bandwidth_y(&sample, SCOTT_A0).unwrap();
        let squared = select_lambda1_rot(&sample, SCOTT_A0).unwrap();
        let linear = select_lambda1_rot_unsquared(&sample, SCOTT_A0).unwrap();
        assert_abs_diff_eq!(squared, linear * h, epsilon = 1e-12);
    }

    #[test]
    fn quantile_interpolation() {
        let data = [1.0, 2.0, 3.0, 4.0];
        assert_abs_diff_eq!(interquartile_range(&data), 1.5, epsilon = 1e-12);
        let sorted = [10.0, 20.0, 30.0];
        assert_abs_diff_eq!(quantile_sorted(&sorted, 0.5), 20.0, epsilon = 1e-12);
        assert_abs_diff_eq!(quantile_sorted(&sorted, 0.25), 15.0, epsilon = 1e-12);
        assert_abs_diff_eq!(quantile_sorted(&sorted, 1.0), 30.0, epsilon = 1e-12);
    }
}
