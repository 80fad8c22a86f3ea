//! Domain types: contaminated samples, evaluation grids, density estimates.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default absolute tolerance when deciding whether error scales are all equal.
///
/// It only gates reduction paths (plain vs adjusted deconvoluting kernel),
/// never correctness.
pub const HOMOSCEDASTIC_TOL: f64 = 1e-12;

/// Observed values `y_j` paired with their known error standard deviations
/// `sigma_j`, the raw input of every estimator in this crate.
///
/// Values are stored unordered as given; all estimators are symmetric in the
/// observation index. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ContaminatedSample {
    y: Vec<f64>,
    sigma: Vec<f64>,
}

impl ContaminatedSample {
    /// Build a sample, validating that both sequences have equal nonzero
    /// length, all values are finite, and every `sigma` is strictly positive.
    pub fn new(y: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::EmptySample);
        }
        if y.len() != sigma.len() {
            return Err(Error::LengthMismatch {
                y: y.len(),
                sigma: sigma.len(),
            });
        }
        for (i, v) in y.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    what: "y",
                    index: i,
                });
            }
        }
        for (i, s) in sigma.iter().enumerate() {
            if !s.is_finite() {
                return Err(Error::NonFinite {
                    what: "sigma",
                    index: i,
                });
            }
            if *s <= 0.0 {
                return Err(Error::NonPositiveSigma { index: i });
            }
        }
        Ok(ContaminatedSample { y, sigma })
    }

    /// Build a sample whose observations share one common error scale.
    pub fn with_common_sigma(y: Vec<f64>, sigma: f64) -> Result<Self> {
        let n = y.len();
        Self::new(y, alloc::vec![sigma; n])
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.y.len()
    }

    /// True when the sample holds no observations (unreachable after `new`).
    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Observed values.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Per-observation error standard deviations.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Harmonic mean of the error scales: `n / sum(1/sigma_j)`.
    ///
    /// Governs the variance constant of the extrapolation estimator; for a
    /// homoscedastic sample it equals the common scale.
    pub fn harmonic_mean_sigma(&self) -> f64 {
        let inv_sum: f64 = self.sigma.iter().map(|s| 1.0 / s).sum();
        self.len() as f64 / inv_sum
    }

    /// Arithmetic mean of the error scales.
    pub fn mean_sigma(&self) -> f64 {
        self.sigma.iter().sum::<f64>() / self.len() as f64
    }

    /// Largest error scale in the sample.
    pub fn max_sigma(&self) -> f64 {
        self.sigma.iter().copied().fold(f64::MIN, f64::max)
    }

    /// True when `max(sigma) - min(sigma) <= tol`.
    pub fn is_homoscedastic(&self, tol: f64) -> bool {
        let max = self.sigma.iter().copied().fold(f64::MIN, f64::max);
        let min = self.sigma.iter().copied().fold(f64::MAX, f64::min);
        max - min <= tol
    }
}

/// Strictly increasing abscissae at which a density estimate is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationGrid {
    points: Vec<f64>,
}

impl EvaluationGrid {
    /// Validate and wrap a point sequence (finite, strictly increasing, >= 2).
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::GridTooShort { len: points.len() });
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite {
                    what: "grid",
                    index: i,
                });
            }
        }
        for i in 1..points.len() {
            if points[i] <= points[i - 1] {
                return Err(Error::GridNotIncreasing { index: i });
            }
        }
        Ok(EvaluationGrid { points })
    }

    /// `n` equally spaced points covering `[lo, hi]` inclusive.
    pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridTooShort { len: n });
        }
        let step = (hi - lo) / (n - 1) as f64;
        let points: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        Self::new(points)
    }

    /// Grid abscissae.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: construction rejects grids shorter than two points.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A density estimate on a grid, with optional pointwise variance and
/// confidence band.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    grid: EvaluationGrid,
    values: Vec<f64>,
    variance: Option<Vec<f64>>,
    band: Option<Band>,
    clipped: bool,
}

/// Pointwise confidence band (lower floored at zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl DensityEstimate {
    /// Wrap estimate values after checking finiteness and length.
    pub fn new(grid: EvaluationGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                y: grid.len(),
                sigma: values.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    what: "estimate",
                    index: i,
                });
            }
        }
        Ok(DensityEstimate {
            grid,
            values,
            variance: None,
            band: None,
            clipped: false,
        })
    }

    /// Attach a pointwise variance sequence (same length, entries >= 0).
    pub fn with_variance(mut self, variance: Vec<f64>) -> Result<Self> {
        if variance.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                y: self.values.len(),
                sigma: variance.len(),
            });
        }
        for (i, v) in variance.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::NonFinite {
                    what: "variance",
                    index: i,
                });
            }
        }
        self.variance = Some(variance);
        Ok(self)
    }

    pub(crate) fn set_band(&mut self, band: Band) {
        self.band = Some(band);
    }

    pub(crate) fn set_clipped(&mut self) {
        self.clipped = true;
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Evaluation grid.
    pub fn grid(&self) -> &EvaluationGrid {
        &self.grid
    }

    /// Estimated density values, aligned with the grid.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pointwise variance, when attached.
    pub fn variance(&self) -> Option<&[f64]> {
        self.variance.as_deref()
    }

    /// Confidence band, when attached.
    pub fn band(&self) -> Option<&Band> {
        self.band.as_ref()
    }

    /// True once negative values have been floored at zero.
    pub fn is_clipped(&self) -> bool {
        self.clipped
    }
}
