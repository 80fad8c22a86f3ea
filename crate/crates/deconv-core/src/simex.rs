//! The variable-bandwidth extrapolation estimator.
//!
//! For an inflation level `lambda > 0` the pseudo-density
//!
//! ```text
//! g*(t, lambda) = (1/n) sum_j phi((t - y_j) / (sigma_j sqrt(lambda))) / (sigma_j sqrt(lambda))
//! ```
//!
//! is the analytic expectation of a kernel estimate on data whose
//! measurement error has been inflated by `lambda`; no simulation is needed
//! to evaluate it. Fitting a quadratic in `lambda` over an increasing grid
//! of levels and evaluating the fit at `lambda = -1` (no error at all)
//! yields the density estimate. Fit-and-extrapolate collapses into a single
//! data-independent weight row `c`, so the estimator is a weighted sum of
//! Gaussian mixtures:
//!
//! ```text
//! f_hat(t) = sum_l c_l g*(t, lambda_l)
//! ```
//!
//! The same weight row drives the pointwise asymptotic variance
//! `f(t) / (n sqrt(2 pi) sigma_H) * c S c'` with `S[l][m] = 1 /
//! sqrt(lambda_l + lambda_m)` and `sigma_H` the harmonic mean error scale.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{gaussian_pdf, INV_SQRT_2PI};
use crate::math;
use crate::model::{Band, ContaminatedSample, DensityEstimate, EvaluationGrid};

/// Contributions farther than this many component standard deviations from
/// an observation are dropped; exp(-9.5^2 / 2) ~ 2e-20 is far below f64
/// significance for any accumulated density value.
const SUPPORT_RADIUS: f64 = 9.5;

/// Strictly increasing, strictly positive error-inflation levels.
///
/// At least three levels are required for the quadratic fit. Zero is
/// excluded: the pseudo-density divides by `sqrt(lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    lambdas: Vec<f64>,
}

impl LambdaGrid {
    /// Validate and wrap a level sequence.
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.len() < 3 {
            return Err(Error::LambdaGridTooShort { len: lambdas.len() });
        }
        for l in &lambdas {
            if !l.is_finite() || *l <= 0.0 {
                return Err(Error::LambdaNotPositive { value: *l });
            }
        }
        for i in 1..lambdas.len() {
            if lambdas[i] <= lambdas[i - 1] {
                return Err(Error::LambdaNotIncreasing { index: i });
            }
        }
        Ok(LambdaGrid { lambdas })
    }

    /// The levels, ascending.
    pub fn values(&self) -> &[f64] {
        &self.lambdas
    }

    /// Number of levels.
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    /// Always false after construction.
    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// Extrapolation weights and covariance kernel for one level grid.
///
/// `weights` is the row composing "fit a quadratic over the levels by least
/// squares, evaluate at -1" into a single dot product. `sigma_matrix` holds
/// `1 / sqrt(lambda_l + lambda_m)` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationPlan {
    grid: LambdaGrid,
    weights: Vec<f64>,
    sigma_matrix: Vec<f64>,
}

impl ExtrapolationPlan {
    /// Level grid the plan was built from.
    pub fn grid(&self) -> &LambdaGrid {
        &self.grid
    }

    /// Extrapolation weight row `c` (sums to 1).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Entry `1 / sqrt(lambda_l + lambda_m)` of the covariance kernel.
    pub fn sigma_entry(&self, l: usize, m: usize) -> f64 {
        self.sigma_matrix[l * self.grid.len() + m]
    }

    /// The quadratic form `c S c'` entering variance and risk formulas.
    pub fn variance_form(&self) -> f64 {
        let s = self.grid.len();
        let mut total = 0.0;
        for l in 0..s {
            let mut row = 0.0;
            for m in 0..s {
                row += self.sigma_matrix[l * s + m] * self.weights[m];
            }
            total += self.weights[l] * row;
        }
        total
    }
}

/// Build the weight row and covariance kernel for a level grid.
///
/// The quadratic is fitted in a centered and scaled coordinate (the fitted
/// function space, hence the extrapolated value, is invariant to the affine
/// change of basis) and solved through Householder QR. Degenerate grids —
/// rank-deficient designs or level spacings so tight that the weights blow
/// up and stop reproducing the monomial identities — are reported instead
/// of returning garbage weights.
pub fn build_plan(grid: &LambdaGrid) -> Result<ExtrapolationPlan> {
    let lambdas = grid.values();
    let s = lambdas.len();

    let mean = lambdas.iter().sum::<f64>() / s as f64;
    let scale = lambdas
        .iter()
        .map(|l| math::abs(l - mean))
        .fold(0.0_f64, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };

    // Design matrix columns 1, u, u^2 in the centered coordinate, row-major.
    let mut a = vec![0.0; s * 3];
    for (i, l) in lambdas.iter().enumerate() {
        let u = (l - mean) / scale;
        a[i * 3] = 1.0;
        a[i * 3 + 1] = u;
        a[i * 3 + 2] = u * u;
    }

    // Householder QR; reflector vectors stay in the lower part of `a`,
    // the diagonal of R moves to `rdiag`.
    let mut beta = [0.0_f64; 3];
    let mut rdiag = [0.0_f64; 3];
    for k in 0..3 {
        let mut norm2 = 0.0;
        for i in k..s {
            norm2 += a[i * 3 + k] * a[i * 3 + k];
        }
        let norm = math::sqrt(norm2);
        if norm < 1e-12 {
            return Err(Error::IllConditionedPlan { diagnostic: norm });
        }
        let akk = a[k * 3 + k];
        let alpha = if akk >= 0.0 { -norm } else { norm };
        let v0 = akk - alpha;
        beta[k] = -1.0 / (alpha * v0);
        rdiag[k] = alpha;
        a[k * 3 + k] = v0;
        for j in (k + 1)..3 {
            let mut dot = 0.0;
            for i in k..s {
                dot += a[i * 3 + k] * a[i * 3 + j];
            }
            let f = beta[k] * dot;
            for i in k..s {
                a[i * 3 + j] -= f * a[i * 3 + k];
            }
        }
    }

    // Weight row c = e R^-1 Q' with e the monomial row at the extrapolation
    // coordinate. Forward-substitute R' v = e', then apply the reflectors in
    // reverse to expand Q v.
    let u_star = (-1.0 - mean) / scale;
    let e = [1.0, u_star, u_star * u_star];
    let r01 = a[1];
    let r02 = a[2];
    let r12 = a[5];
    let mut v = [0.0_f64; 3];
    v[0] = e[0] / rdiag[0];
    v[1] = (e[1] - r01 * v[0]) / rdiag[1];
    v[2] = (e[2] - r02 * v[0] - r12 * v[1]) / rdiag[2];

    let mut weights = vec![0.0; s];
    weights[..3].copy_from_slice(&v);
    for k in (0..3).rev() {
        let mut dot = 0.0;
        for i in k..s {
            dot += a[i * 3 + k] * weights[i];
        }
        let f = beta[k] * dot;
        for i in k..s {
            weights[i] -= f * a[i * 3 + k];
        }
    }

    // The weight row must reproduce 1, lambda and lambda^2 at -1 or the
    // grid is too degenerate to extrapolate from.
    let sum_c: f64 = weights.iter().sum();
    let sum_cl: f64 = weights.iter().zip(lambdas).map(|(c, l)| c * l).sum();
    let sum_cl2: f64 = weights.iter().zip(lambdas).map(|(c, l)| c * l * l).sum();
    let lambda_scale = math::abs(lambdas[s - 1]).max(1.0);
    let defect = math::abs(sum_c - 1.0)
        .max(math::abs(sum_cl + 1.0) / lambda_scale)
        .max(math::abs(sum_cl2 - 1.0) / (lambda_scale * lambda_scale));
    if defect > 1e-10 {
        return Err(Error::IllConditionedPlan { diagnostic: defect });
    }

    let mut sigma_matrix = vec![0.0; s * s];
    for l in 0..s {
        for m in 0..s {
            sigma_matrix[l * s + m] = 1.0 / math::sqrt(lambdas[l] + lambdas[m]);
        }
    }

    Ok(ExtrapolationPlan {
        grid: grid.clone(),
        weights,
        sigma_matrix,
    })
}

/// Pseudo-density `g*(t, lambda)`: the error-inflated mixture of Gaussians
/// centered at the observations with scales `sigma_j * sqrt(lambda)`.
///
/// Strictly positive; as a function of `t` it integrates to one exactly.
pub fn pseudo_density(t: f64, lambda: f64, sample: &ContaminatedSample) -> f64 {
    debug_assert!(lambda > 0.0);
    let sqrt_l = math::sqrt(lambda);
    let mut acc = 0.0;
    for (y, s) in sample.y().iter().zip(sample.sigma().iter()) {
        let scale = s * sqrt_l;
        acc += gaussian_pdf((t - y) / scale) / scale;
    }
    acc / sample.len() as f64
}

/// Evaluate the extrapolation estimate on a grid.
///
/// At each grid point the value is `sum_l c_l g*(t, lambda_l)`; values may be
/// negative in sparse regions (see [`clip_nonnegative`]).
pub fn simex_estimate(
    sample: &ContaminatedSample,
    grid: &LambdaGrid,
    eval: &EvaluationGrid,
) -> Result<DensityEstimate> {
    let plan = build_plan(grid)?;
    simex_estimate_with_plan(sample, &plan, eval)
}

/// Evaluate with a prebuilt plan (the weight row is data-independent, so one
/// plan serves any number of samples sharing the level grid).
pub fn simex_estimate_with_plan(
    sample: &ContaminatedSample,
    plan: &ExtrapolationPlan,
    eval: &EvaluationGrid,
) -> Result<DensityEstimate> {
    let values = simex_values(sample, plan, eval.points());
    DensityEstimate::new(eval.clone(), values)
}

fn simex_values(sample: &ContaminatedSample, plan: &ExtrapolationPlan, ts: &[f64]) -> Vec<f64> {
    let lambdas = plan.grid().values();
    let c = plan.weights();
    let s = lambdas.len();
    let n = sample.len() as f64;

    let sqrt_l: Vec<f64> = lambdas.iter().map(|l| math::sqrt(*l)).collect();
    let widest = sqrt_l[s - 1];

    let mut acc = vec![0.0; ts.len()];
    let mut coef = vec![0.0; s];
    let mut halfinv = vec![0.0; s];

    for (y, sig) in sample.y().iter().zip(sample.sigma().iter()) {
        for l in 0..s {
            let scale = sig * sqrt_l[l];
            coef[l] = c[l] * INV_SQRT_2PI / (n * scale);
            halfinv[l] = 0.5 / (scale * scale);
        }
        // Outside the widest component's support radius every level's
        // contribution is below 1e-19 in absolute value; skip those points.
        let radius = SUPPORT_RADIUS * sig * widest;
        let lo = ts.partition_point(|t| *t < y - radius);
        let hi = ts.partition_point(|t| *t <= y + radius);
        for (t, slot) in ts[lo..hi].iter().zip(acc[lo..hi].iter_mut()) {
            let d2 = (t - y) * (t - y);
            // Narrow levels underflow first; find the first level whose
            // exponent is still significant and sum from there.
            let mut first = 0;
            while first < s && d2 * halfinv[first] > 45.0 {
                first += 1;
            }
            let mut point = 0.0;
            for l in first..s {
                point += coef[l] * math::exp(-d2 * halfinv[l]);
            }
            *slot += point;
        }
    }
    acc
}

/// Plug-in pointwise variance
/// `max(f_hat(t), 0) * cSc' / (n sqrt(2 pi) sigma_H)`.
///
/// Negative estimate values are floored at zero before multiplying, so the
/// variance is zero wherever the plug-in density is.
pub fn simex_variance(
    estimate_values: &[f64],
    sample: &ContaminatedSample,
    plan: &ExtrapolationPlan,
) -> Vec<f64> {
    let quad_form = plan.variance_form();
    let sigma_h = sample.harmonic_mean_sigma();
    let denom = sample.len() as f64 * math::sqrt(2.0 * PI) * sigma_h;
    estimate_values
        .iter()
        .map(|f| f.max(0.0) * quad_form / denom)
        .collect()
}

/// Attach a pointwise normal-approximation confidence band
/// `f_hat +/- z * sqrt(variance)`, lower limit floored at zero.
///
/// The estimate must already carry a variance (see [`simex_variance`]).
pub fn simex_confidence_band(mut est: DensityEstimate, level: f64) -> Result<DensityEstimate> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel { level });
    }
    let variance = est.variance().ok_or(Error::MissingVariance)?;
    let z = math::normal_quantile(0.5 * (1.0 + level));
    let lower: Vec<f64> = est
        .values()
        .iter()
        .zip(variance.iter())
        .map(|(f, v)| (f - z * math::sqrt(*v)).max(0.0))
        .collect();
    let upper: Vec<f64> = est
        .values()
        .iter()
        .zip(variance.iter())
        .map(|(f, v)| f + z * math::sqrt(*v))
        .collect();
    est.set_band(Band { lower, upper });
    Ok(est)
}

/// Pointwise maximum with zero; marks the estimate as clipped. Idempotent.
pub fn clip_nonnegative(mut est: DensityEstimate) -> DensityEstimate {
    for v in est.values_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    est.set_clipped();
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use approx::assert_abs_diff_eq;

    /// Exact quadratic interpolation through three level/value pairs,
    /// evaluated at -1: the independent route the least-squares path must
    /// reproduce for s = 3.
    fn lagrange_at_minus_one(lambdas: &[f64; 3], values: &[f64; 3]) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            let mut basis = 1.0;
            for j in 0..3 {
                if i != j {
                    basis *= (-1.0 - lambdas[j]) / (lambdas[i] - lambdas[j]);
                }
            }
            acc += basis * values[i];
        }
        acc
    }

    fn grid_123() -> LambdaGrid {
        LambdaGrid::new(alloc::vec![1.0, 2.0, 3.0]).unwrap()
    }

    #[test]
    fn lambda_grid_validation() {
        assert!(LambdaGrid::new(alloc::vec![1.0, 2.0]).is_err());
        assert!(LambdaGrid::new(alloc::vec![0.0, 1.0, 2.0]).is_err());
        assert!(LambdaGrid::new(alloc::vec![-1.0, 1.0, 2.0]).is_err());
        assert!(LambdaGrid::new(alloc::vec![1.0, 1.0, 2.0]).is_err());
        assert!(LambdaGrid::new(alloc::vec![1.0, 2.0, 3.0]).is_ok());
    }

    #[test]
    fn plan_weights_for_1_2_3_are_lagrange() {
        let plan = build_plan(&grid_123()).unwrap();
        let c = plan.weights();
        assert_abs_diff_eq!(c[0], 6.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c[1], -8.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c[2], 3.0, epsilon = 1e-10);
    }

    #[test]
    fn plan_weights_sum_to_one() {
        let mut rng = Stream::from_seed(7);
        for _ in 0..100 {
            let l1 = rng.uniform_in(0.05, 5.0);
            let span = rng.uniform_in(0.5, 8.0);
            let s = 3 + (rng.next_u64() % 48) as usize;
            let step = span / (s - 1) as f64;
            let lambdas: Vec<f64> = (0..s).map(|i| l1 + step * i as f64).collect();
            let plan = build_plan(&LambdaGrid::new(lambdas).unwrap()).unwrap();
            let sum: f64 = plan.weights().iter().sum();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn sigma_matrix_entries_for_1_3_5() {
        let grid = LambdaGrid::new(alloc::vec![1.0, 3.0, 5.0]).unwrap();
        let plan = build_plan(&grid).unwrap();
        assert_abs_diff_eq!(plan.sigma_entry(0, 0), 1.0 / 2.0f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(plan.sigma_entry(0, 1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(plan.sigma_entry(1, 1), 1.0 / 6.0f64.sqrt(), epsilon = 1e-15);
        assert_eq!(plan.sigma_entry(0, 1), plan.sigma_entry(1, 0));
    }

    #[test]
    fn near_duplicate_levels_are_rejected() {
        let grid = LambdaGrid::new(alloc::vec![5.0, 5.0 + 1e-12, 5.0 + 2e-12]).unwrap();
        assert!(matches!(
            build_plan(&grid),
            Err(Error::IllConditionedPlan { .. })
        ));
    }

    #[test]
    fn pseudo_density_single_observation() {
        let s = ContaminatedSample::new(alloc::vec![0.0], alloc::vec![1.0]).unwrap();
        assert_abs_diff_eq!(pseudo_density(0.0, 1.0, &s), 0.398942, epsilon = 1e-6);
        let s2 = ContaminatedSample::new(alloc::vec![0.0], alloc::vec![2.0]).unwrap();
        assert_abs_diff_eq!(pseudo_density(0.0, 1.0, &s2), 0.199471, epsilon = 1e-6);
    }

    #[test]
    fn pseudo_density_two_observations() {
        let s = ContaminatedSample::new(alloc::vec![-1.0, 1.0], alloc::vec![1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(pseudo_density(0.0, 1.0, &s), 0.241971, epsilon = 1e-6);
    }

    #[test]
    fn estimate_single_observation_matches_weighted_levels() {
        // One observation at 0 with unit scale, levels (1, 2, 3): the value
        // at t = 0 is phi(0) * (6 - 8/sqrt(2) + 3/sqrt(3)).
        let s = ContaminatedSample::new(alloc::vec![0.0], alloc::vec![1.0]).unwrap();
        let eval = EvaluationGrid::new(alloc::vec![0.0, 1.0]).unwrap();
        let est = simex_estimate(&s, &grid_123(), &eval).unwrap();
        let expected = gaussian_pdf(0.0) * (6.0 - 8.0 / 2.0f64.sqrt() + 3.0 / 3.0f64.sqrt());
        assert_abs_diff_eq!(expected, 0.827884, epsilon = 1e-6);
        assert_abs_diff_eq!(est.values()[0], expected, epsilon = 1e-10);
        // Same value through the interpolation oracle.
        let lambdas = [1.0, 2.0, 3.0];
        let g = [
            pseudo_density(0.0, 1.0, &s),
            pseudo_density(0.0, 2.0, &s),
            pseudo_density(0.0, 3.0, &s),
        ];
        assert_abs_diff_eq!(
            est.values()[0],
            lagrange_at_minus_one(&lambdas, &g),
            epsilon = 1e-10
        );
    }

    #[test]
    fn least_squares_equals_lagrange_for_three_levels() {
        let mut rng = Stream::from_seed(41);
        for _ in 0..50 {
            let n = 1 + (rng.next_u64() % 12) as usize;
            let y: Vec<f64> = (0..n).map(|_| rng.normal() * 2.0).collect();
            let sigma: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.1, 1.5)).collect();
            let sample = ContaminatedSample::new(y, sigma).unwrap();
            let l1 = rng.uniform_in(0.1, 2.0);
            let lambdas = [
                l1,
                l1 + rng.uniform_in(0.3, 2.0),
                l1 + rng.uniform_in(2.5, 5.0),
            ];
            let grid = LambdaGrid::new(lambdas.to_vec()).unwrap();
            let t = rng.uniform_in(-4.0, 4.0);
            let eval = EvaluationGrid::new(alloc::vec![t, t + 1.0]).unwrap();
            let est = simex_estimate(&sample, &grid, &eval).unwrap();
            let g = [
                pseudo_density(t, lambdas[0], &sample),
                pseudo_density(t, lambdas[1], &sample),
                pseudo_density(t, lambdas[2], &sample),
            ];
            assert_abs_diff_eq!(
                est.values()[0],
                lagrange_at_minus_one(&lambdas, &g),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn location_equivariance_is_exact_on_dyadic_data() {
        // Dyadic observations, grid points and shift make every addition
        // exact in binary floating point, so the shifted estimate must be
        // bit-identical to the unshifted one.
        let y = alloc::vec![-1.5, 0.25, 0.75, 2.0];
        let sigma = alloc::vec![0.5, 0.25, 0.5, 1.0];
        let sample = ContaminatedSample::new(y.clone(), sigma.clone()).unwrap();
        let delta = 512.0;
        let shifted =
            ContaminatedSample::new(y.iter().map(|v| v + delta).collect(), sigma).unwrap();
        let grid = grid_123();
        let ts: Vec<f64> = (0..33).map(|i| -4.0 + 0.25 * i as f64).collect();
        let eval = EvaluationGrid::new(ts.clone()).unwrap();
        let eval_shifted = EvaluationGrid::new(ts.iter().map(|t| t + delta).collect()).unwrap();
        let a = simex_estimate(&sample, &grid, &eval).unwrap();
        let b = simex_estimate(&shifted, &grid, &eval_shifted).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn variance_formula_hand_example() {
        // f_hat = 0.4, n = 100, sigma_H = 0.5, cSc' = 2.0.
        let quad_form = 2.0;
        let value: f64 = 0.4 * quad_form / (100.0 * (2.0 * PI).sqrt() * 0.5);
        assert_abs_diff_eq!(value, 0.0063831, epsilon = 1e-7);
    }

    #[test]
    fn variance_floors_negative_density_and_scales_with_n() {
        let plan = build_plan(&grid_123()).unwrap();
        let s100 = ContaminatedSample::new(alloc::vec![0.0; 100], alloc::vec![0.5; 100]).unwrap();
        let s200 = ContaminatedSample::new(alloc::vec![0.0; 200], alloc::vec![0.5; 200]).unwrap();
        let v100 = simex_variance(&[0.4, -0.1, 0.0], &s100, &plan);
        assert_eq!(v100[1], 0.0);
        assert_eq!(v100[2], 0.0);
        assert!(v100[0] > 0.0);
        let v200 = simex_variance(&[0.4], &s200, &plan);
        assert_abs_diff_eq!(v200[0], v100[0] / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn confidence_band_hand_example() {
        let grid = EvaluationGrid::new(alloc::vec![0.0, 1.0]).unwrap();
        let est = DensityEstimate::new(grid, alloc::vec![0.4, 0.4])
            .unwrap()
            .with_variance(alloc::vec![0.0064, 0.0064])
            .unwrap();
        let banded = simex_confidence_band(est, 0.95).unwrap();
        let band = banded.band().unwrap();
        assert_abs_diff_eq!(band.lower[0], 0.24320, epsilon = 1e-5);
        assert_abs_diff_eq!(band.upper[0], 0.55680, epsilon = 1e-5);
    }

    #[test]
    fn confidence_band_zero_variance_collapses() {
        let grid = EvaluationGrid::new(alloc::vec![0.0, 1.0]).unwrap();
        let est = DensityEstimate::new(grid, alloc::vec![0.3, 0.1])
            .unwrap()
            .with_variance(alloc::vec![0.0, 0.0])
            .unwrap();
        let banded = simex_confidence_band(est, 0.95).unwrap();
        let band = banded.band().unwrap();
        assert_eq!(band.lower, alloc::vec![0.3, 0.1]);
        assert_eq!(band.upper, alloc::vec![0.3, 0.1]);
    }

    #[test]
    fn confidence_band_widens_with_level() {
        let grid = EvaluationGrid::new(alloc::vec![0.0, 1.0]).unwrap();
        let est = DensityEstimate::new(grid, alloc::vec![0.4, 0.2])
            .unwrap()
            .with_variance(alloc::vec![0.01, 0.02])
            .unwrap();
        let narrow = simex_confidence_band(est.clone(), 0.90).unwrap();
        let wide = simex_confidence_band(est, 0.99).unwrap();
        for i in 0..2 {
            assert!(wide.band().unwrap().upper[i] > narrow.band().unwrap().upper[i]);
        }
    }

    #[test]
    fn confidence_band_requires_variance() {
        let grid = EvaluationGrid::new(alloc::vec![0.0, 1.0]).unwrap();
        let est = DensityEstimate::new(grid, alloc::vec![0.4, 0.2]).unwrap();
        assert_eq!(
            simex_confidence_band(est, 0.95),
            Err(Error::MissingVariance)
        );
    }

    #[test]
    fn clip_examples() {
        let grid = EvaluationGrid::new(alloc::vec![0.0, 1.0, 2.0]).unwrap();
        let est = DensityEstimate::new(grid, alloc::vec![0.1, -0.02, 0.3]).unwrap();
        let clipped = clip_nonnegative(est);
        assert_eq!(clipped.values(), &[0.1, 0.0, 0.3]);
        assert!(clipped.is_clipped());
        let again = clip_nonnegative(clipped.clone());
        assert_eq!(again.values(), clipped.values());
    }
}
