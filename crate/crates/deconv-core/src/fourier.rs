//! Fourier-type reference estimators.
//!
//! These are the estimators the extrapolation method is benchmarked
//! against: the naive kernel density estimate that ignores measurement
//! error, the deconvoluting kernel estimator (DKE) for a single known error
//! scale, and its adjustment for per-observation error scales. Both DKE
//! variants evaluate their kernels by direct quadrature at every grid
//! point — no transform tricks — so their cost reflects the method as
//! defined.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernels::{adjusted_series, deconv_series, gaussian_pdf, QuadratureSpec};
use crate::math;
use crate::model::{ContaminatedSample, DensityEstimate, EvaluationGrid, HOMOSCEDASTIC_TOL};

/// A validated, strictly positive kernel bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth(f64);

impl Bandwidth {
    /// Wrap a bandwidth, rejecting non-positive or non-finite values.
    pub fn new(h: f64) -> Result<Self> {
        if h <= 0.0 || !h.is_finite() {
            return Err(Error::InvalidBandwidth { h });
        }
        Ok(Bandwidth(h))
    }

    /// The bandwidth value.
    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Default multiplier for [`dke_plugin_bandwidth`].
pub const DEFAULT_PLUGIN_C0: f64 = 1.05;

/// Gaussian-kernel density estimate of arbitrary data on a grid.
///
/// The workhorse behind [`naive_kde`] and the uncontaminated-reference
/// estimator in the simulation lab.
pub fn gaussian_kde(data: &[f64], h: Bandwidth, eval: &EvaluationGrid) -> Result<DensityEstimate> {
    if data.is_empty() {
        return Err(Error::EmptySample);
    }
    let h = h.get();
    let n = data.len() as f64;
    let values: Vec<f64> = eval
        .points()
        .iter()
        .map(|x| data.iter().map(|y| gaussian_pdf((x - y) / h)).sum::<f64>() / (n * h))
        .collect();
    DensityEstimate::new(eval.clone(), values)
}

/// Kernel density estimate of the observed values, ignoring their
/// measurement error. Biased for the latent density; kept as the baseline
/// every correction is judged against.
pub fn naive_kde(
    sample: &ContaminatedSample,
    h: Bandwidth,
    eval: &EvaluationGrid,
) -> Result<DensityEstimate> {
    gaussian_kde(sample.y(), h, eval)
}

/// Deconvoluting kernel estimator for one known error scale `sigma`.
///
/// The sample must be homoscedastic: pooling unequal scales silently would
/// answer a different question, so heteroscedastic input is refused in
/// favour of [`adjusted_dke_estimate`]. `sigma` itself is the deconvolution
/// scale and may be zero, which reduces the estimator to a kernel density
/// estimate with the smoothing kernel.
pub fn dke_estimate(
    sample: &ContaminatedSample,
    h: Bandwidth,
    sigma: f64,
    eval: &EvaluationGrid,
    q: &QuadratureSpec,
) -> Result<DensityEstimate> {
    if !sample.is_homoscedastic(HOMOSCEDASTIC_TOL) {
        return Err(Error::HeteroscedasticSample);
    }
    let h = h.get();
    let series = deconv_series(h, sigma, q)?;
    let n = sample.len() as f64;
    let values: Vec<f64> = eval
        .points()
        .iter()
        .map(|x| {
            sample
                .y()
                .iter()
                .map(|y| series.eval((x - y) / h))
                .sum::<f64>()
                / (n * h)
        })
        .collect();
    DensityEstimate::new(eval.clone(), values)
}

/// Adjusted deconvoluting kernel estimator for per-observation error scales.
///
/// Each observation gets its own kernel built from the pooled error
/// characteristic functions; under equal scales this reduces exactly to
/// [`dke_estimate`].
pub fn adjusted_dke_estimate(
    sample: &ContaminatedSample,
    h: Bandwidth,
    eval: &EvaluationGrid,
    q: &QuadratureSpec,
) -> Result<DensityEstimate> {
    let h = h.get();
    let sigmas = sample.sigma();
    let series: Vec<_> = sigmas
        .iter()
        .map(|s| adjusted_series(h, *s, sigmas, q))
        .collect::<Result<_>>()?;
    let n = sample.len() as f64;
    let values: Vec<f64> = eval
        .points()
        .iter()
        .map(|x| {
            sample
                .y()
                .iter()
                .zip(series.iter())
                .map(|(y, k)| k.eval((x - y) / h))
                .sum::<f64>()
                / (n * h)
        })
        .collect();
    DensityEstimate::new(eval.clone(), values)
}

/// Plug-in bandwidth `c0 * sigma_w * (ln n)^(-1/2)` for the deconvoluting
/// kernel estimators, with `sigma_w` the error scale: the common scale under
/// homoscedasticity, the mean scale otherwise.
pub fn dke_plugin_bandwidth(sample: &ContaminatedSample, c0: f64) -> Result<Bandwidth> {
    if c0 <= 0.0 || !c0.is_finite() {
        return Err(Error::NonPositiveParameter {
            what: "c0",
            value: c0,
        });
    }
    let n = sample.len();
    if n < 2 {
        return Err(Error::TooFewObservations { n, min: 2 });
    }
    let sigma_w = if sample.is_homoscedastic(HOMOSCEDASTIC_TOL) {
        sample.sigma()[0]
    } else {
        sample.mean_sigma()
    };
    Bandwidth::new(c0 * sigma_w / math::sqrt(math::ln(n as f64)))
}
