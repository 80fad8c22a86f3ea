//! Kernel functions and deconvoluting kernels.
//!
//! The smoothing kernel used throughout is the second-order kernel whose
//! characteristic function is `(1 - t^2)^3` on `[-1, 1]`. Compact support of
//! the characteristic function is what keeps the Fourier-inverted
//! deconvoluting kernels well defined for Gaussian errors; the price is a
//! slowly decaying, oscillating kernel in the spatial domain.
//!
//! Deconvoluting kernels have no closed form here and are evaluated by
//! fixed-order quadrature of their cosine integrals on `[0, 1]`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

/// `1 / sqrt(2 pi)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Largest exponent fed to `exp` before the overflow guard trips.
const MAX_EXPONENT: f64 = 700.0;

/// Standard normal density.
#[inline]
pub fn gaussian_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * math::exp(-0.5 * x * x)
}

/// Characteristic function of the smoothing kernel: `(1 - t^2)^3` on
/// `[-1, 1]`, zero outside.
#[inline]
pub fn supersmooth_cf(t: f64) -> f64 {
    if !(-1.0..=1.0).contains(&t) {
        0.0
    } else {
        let u = 1.0 - t * t;
        u * u * u
    }
}

/// Threshold below which the closed form of [`supersmooth_kernel`] loses all
/// precision to cancellation and the series form takes over.
const NEAR_ZERO: f64 = 0.5;

/// The smoothing kernel itself: the inverse Fourier transform of
/// [`supersmooth_cf`], i.e. `(1/pi) * integral_0^1 cos(t x) (1 - t^2)^3 dt`.
///
/// For `|x| >= 0.5` the closed form
/// `48 cos(x) / (pi x^4) * (1 - 15/x^2) - 144 sin(x) / (pi x^5) * (2 - 5/x^2)`
/// is used; below that the `x^-4`/`x^-5` terms cancel catastrophically, so
/// the cosine integral is summed as its (rapidly converging) power series.
pub fn supersmooth_kernel(x: f64) -> f64 {
    let ax = math::abs(x);
    if ax < NEAR_ZERO {
        // (1/pi) sum_m (-1)^m x^(2m) / (2m)! * I_m with
        // I_m = int_0^1 t^(2m) (1 - t^2)^3 dt.
        let x2 = x * x;
        let mut term_x = 1.0; // x^(2m) / (2m)!
        let mut sum = 0.0;
        let mut m = 0u32;
        loop {
            let tm = 2.0 * m as f64;
            let i_m = 1.0 / (tm + 1.0) - 3.0 / (tm + 3.0) + 3.0 / (tm + 5.0) - 1.0 / (tm + 7.0);
            let term = term_x * i_m;
            sum += if m.is_multiple_of(2) { term } else { -term };
            if term < 1e-18 || m >= 16 {
                break;
            }
            m += 1;
            term_x *= x2 / ((tm + 1.0) * (tm + 2.0));
        }
        sum / PI
    } else {
        let x2 = ax * ax;
        let x4 = x2 * x2;
        48.0 * math::cos(ax) / (PI * x4) * (1.0 - 15.0 / x2)
            - 144.0 * math::sin(ax) / (PI * x4 * ax) * (2.0 - 5.0 / x2)
    }
}

/// Quadrature rule for the cosine integrals on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Fixed-order Gauss-Legendre; exact for polynomials of degree `2n - 1`.
    GaussLegendre,
    /// Composite Simpson with `nodes` subintervals (rounded up to even).
    Simpson,
}

/// Fixed quadrature configuration: node count, scheme, and the absolute
/// accuracy the rule is trusted to deliver on these integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    nodes: usize,
    scheme: QuadratureScheme,
    abs_tol: f64,
}

impl QuadratureSpec {
    /// Validate a configuration: at least 16 nodes, positive tolerance.
    pub fn new(nodes: usize, scheme: QuadratureScheme, abs_tol: f64) -> Result<Self> {
        if nodes < 16 {
            return Err(Error::QuadratureNodesTooFew { nodes });
        }
        if abs_tol <= 0.0 || !abs_tol.is_finite() {
            return Err(Error::NonPositiveParameter {
                what: "abs_tol",
                value: abs_tol,
            });
        }
        Ok(QuadratureSpec {
            nodes,
            scheme,
            abs_tol,
        })
    }

    /// Node count.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Scheme in use.
    pub fn scheme(&self) -> QuadratureScheme {
        self.scheme
    }

    /// Trusted absolute accuracy.
    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    /// Abscissae and weights on `[0, 1]`.
    pub(crate) fn rule(&self) -> (Vec<f64>, Vec<f64>) {
        match self.scheme {
            QuadratureScheme::GaussLegendre => gauss_legendre_01(self.nodes),
            QuadratureScheme::Simpson => simpson_01(self.nodes),
        }
    }

    /// Integrate a function over `[0, 1]` with this rule.
    pub fn integrate_01(&self, f: impl Fn(f64) -> f64) -> f64 {
        let (x, w) = self.rule();
        x.iter().zip(w.iter()).map(|(xi, wi)| wi * f(*xi)).sum()
    }
}

impl Default for QuadratureSpec {
    /// 256-node Gauss-Legendre, trusted to 1e-8 on the smooth integrands
    /// of this module.
    fn default() -> Self {
        QuadratureSpec {
            nodes: 256,
            scheme: QuadratureScheme::GaussLegendre,
            abs_tol: 1e-8,
        }
    }
}

/// Gauss-Legendre nodes and weights mapped to `[0, 1]`, ascending.
///
/// Newton iteration on the Legendre recurrence with the usual Chebyshev
/// initial guesses; stable far beyond the node counts used here.
fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = math::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p_prev = 1.0;
            let mut p = x;
            for k in 2..=n {
                let kf = k as f64;
                let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
                p_prev = p;
                p = p_next;
            }
            dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if math::abs(dx) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th root from the top on [-1, 1]; mirror to fill both ends.
        nodes[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 0.5 * w;
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Composite Simpson abscissae and weights on `[0, 1]` with at least
/// `nodes` subintervals (rounded up to even).
fn simpson_01(nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let n = if nodes.is_multiple_of(2) {
        nodes
    } else {
        nodes + 1
    };
    let h = 1.0 / n as f64;
    let mut x = Vec::with_capacity(n + 1);
    let mut w = Vec::with_capacity(n + 1);
    for i in 0..=n {
        x.push(i as f64 * h);
        let wi = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        w.push(wi * h / 3.0);
    }
    (x, w)
}

/// Cosine-series form of a deconvoluting kernel:
/// `K(z) = sum_k coef[k] * cos(freq[k] * z)`.
///
/// Building the series hoists every bandwidth- and error-scale-dependent
/// factor out of the per-point evaluation, which then costs one cosine per
/// node.
#[derive(Debug, Clone)]
pub(crate) struct CosineSeries {
    pub freq: Vec<f64>,
    pub coef: Vec<f64>,
}

impl CosineSeries {
    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for (f, c) in self.freq.iter().zip(self.coef.iter()) {
            acc += c * math::cos(f * z);
        }
        acc
    }
}

fn check_bandwidth(h: f64) -> Result<()> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::InvalidBandwidth { h });
    }
    Ok(())
}

/// Series for the homoscedastic deconvoluting kernel
/// `(1/pi) * integral_0^1 cos(t z) (1 - t^2)^3 exp(sigma^2 t^2 / (2 h^2)) dt`.
pub(crate) fn deconv_series(h: f64, sigma: f64, q: &QuadratureSpec) -> Result<CosineSeries> {
    check_bandwidth(h)?;
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(Error::NonPositiveParameter {
            what: "sigma",
            value: sigma,
        });
    }
    let growth = sigma * sigma / (2.0 * h * h);
    if growth > MAX_EXPONENT {
        return Err(Error::BandwidthOverflow {
            sigma,
            h,
            min_h: sigma / math::sqrt(2.0 * MAX_EXPONENT),
        });
    }
    let (x, w) = q.rule();
    let coef = x
        .iter()
        .zip(w.iter())
        .map(|(t, wt)| wt * supersmooth_cf(*t) * math::exp(growth * t * t) / PI)
        .collect();
    Ok(CosineSeries { freq: x, coef })
}

/// Deconvoluting kernel for Gaussian error of scale `sigma` at bandwidth `h`.
///
/// Reduces to [`supersmooth_kernel`] (up to quadrature accuracy) when
/// `sigma = 0`. Values may legitimately be negative; the deconvoluting
/// kernel is not a density. Fails rather than overflowing when `sigma / h`
/// is too large, naming the minimal admissible bandwidth.
pub fn deconv_kernel(z: f64, h: f64, sigma: f64, q: &QuadratureSpec) -> Result<f64> {
    Ok(deconv_series(h, sigma, q)?.eval(z))
}

/// Pooled error characteristic-function ratio used by the adjusted
/// deconvoluting kernel:
/// `psi_j(t) = (1/n) sum_k exp(-t^2 sigma_k^2) * exp(t^2 sigma_j^2 / 2)`.
///
/// Under equal scales this collapses to the single Gaussian characteristic
/// function `exp(-t^2 sigma^2 / 2)`. Error scales may be zero here; samples
/// enforce positivity, but the kernel-level functions do not need it.
pub fn psi_u(t: f64, sigma_j: f64, sigmas: &[f64]) -> f64 {
    let t2 = t * t;
    let pooled: f64 =
        sigmas.iter().map(|s| math::exp(-t2 * s * s)).sum::<f64>() / sigmas.len() as f64;
    pooled * math::exp(0.5 * t2 * sigma_j * sigma_j)
}

/// Series for the adjusted deconvoluting kernel of observation `j`:
/// `(1/pi) * integral_0^1 cos(t z) (1 - t^2)^3 / psi_j(t / h) dt`.
pub(crate) fn adjusted_series(
    h: f64,
    sigma_j: f64,
    sigmas: &[f64],
    q: &QuadratureSpec,
) -> Result<CosineSeries> {
    check_bandwidth(h)?;
    if sigmas.is_empty() {
        return Err(Error::EmptySample);
    }
    let (x, w) = q.rule();
    let n = sigmas.len() as f64;
    let max_sigma = sigmas.iter().copied().fold(sigma_j, f64::max);
    let mut coef = Vec::with_capacity(x.len());
    for (t, wt) in x.iter().zip(w.iter()) {
        let u2 = (t / h) * (t / h);
        let pooled: f64 = sigmas.iter().map(|s| math::exp(-u2 * s * s)).sum::<f64>() / n;
        let c = wt * supersmooth_cf(*t) * math::exp(-0.5 * u2 * sigma_j * sigma_j) / (pooled * PI);
        if !c.is_finite() {
            return Err(Error::BandwidthOverflow {
                sigma: max_sigma,
                h,
                min_h: max_sigma / math::sqrt(2.0 * MAX_EXPONENT),
            });
        }
        coef.push(c);
    }
    Ok(CosineSeries { freq: x, coef })
}

/// Adjusted deconvoluting kernel for observation scale `sigma_j` within the
/// pool `sigmas`. Equal to [`deconv_kernel`] when all scales coincide.
pub fn adjusted_deconv_kernel(
    z: f64,
    h: f64,
    sigma_j: f64,
    sigmas: &[f64],
    q: &QuadratureSpec,
) -> Result<f64> {
    Ok(adjusted_series(h, sigma_j, sigmas, q)?.eval(z))
}
