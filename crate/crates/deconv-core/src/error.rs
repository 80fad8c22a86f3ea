//! Error type shared by every module of the crate.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while validating inputs or estimating.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A sample must contain at least one observation.
    EmptySample,
    /// `y` and `sigma` must have the same length.
    LengthMismatch { y: usize, sigma: usize },
    /// Every error scale must be strictly positive.
    NonPositiveSigma { index: usize },
    /// A value that must be finite was NaN or infinite.
    NonFinite { what: &'static str, index: usize },
    /// An evaluation grid needs at least two points.
    GridTooShort { len: usize },
    /// Evaluation grid points must be strictly increasing.
    GridNotIncreasing { index: usize },
    /// An inflation-level grid needs at least three levels for a quadratic fit.
    LambdaGridTooShort { len: usize },
    /// Inflation levels must be strictly positive.
    LambdaNotPositive { value: f64 },
    /// Inflation levels must be strictly increasing.
    LambdaNotIncreasing { index: usize },
    /// The extrapolation design is numerically singular (near-duplicate levels).
    IllConditionedPlan { diagnostic: f64 },
    /// The deconvoluting kernel would overflow; enlarge the bandwidth.
    BandwidthOverflow { sigma: f64, h: f64, min_h: f64 },
    /// Bandwidths must be strictly positive and finite.
    InvalidBandwidth { h: f64 },
    /// A scalar parameter that must be strictly positive was not.
    NonPositiveParameter { what: &'static str, value: f64 },
    /// The plain deconvoluting kernel estimator requires equal error scales.
    HeteroscedasticSample,
    /// The operation needs more observations than the sample provides.
    TooFewObservations { n: usize, min: usize },
    /// All observations identical: no spread to base a bandwidth on.
    DegenerateSample,
    /// Quadrature needs at least 16 abscissae.
    QuadratureNodesTooFew { nodes: usize },
    /// Search bounds must satisfy `0 < lower < upper`.
    InvalidSearchBounds { lower: f64, upper: f64 },
    /// The smoothing-level search ended on a boundary; widen the bounds.
    BoundaryMinimum {
        lambda1: f64,
        lower: f64,
        upper: f64,
    },
    /// The variance quadratic form came out non-positive.
    NonPositiveObjective { lambda1: f64, value: f64 },
    /// Confidence bands need a variance estimate attached first.
    MissingVariance,
    /// Confidence levels must lie strictly inside (0, 1).
    InvalidLevel { level: f64 },
    /// An experiment plan violated one or more invariants.
    InvalidPlan { violations: Vec<String> },
    /// Too many replicates failed for one estimator; the run is unreliable.
    TooManyExclusions {
        estimator: &'static str,
        excluded: usize,
        replicates: usize,
        first_cause: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySample => write!(f, "sample is empty"),
            Error::LengthMismatch { y, sigma } => {
                write!(f, "y has {y} entries but sigma has {sigma}")
            }
            Error::NonPositiveSigma { index } => {
                write!(f, "sigma[{index}] must be > 0 (a zero error scale makes the pseudo-density singular)")
            }
            Error::NonFinite { what, index } => write!(f, "{what}[{index}] is not finite"),
            Error::GridTooShort { len } => {
                write!(f, "evaluation grid needs at least 2 points, got {len}")
            }
            Error::GridNotIncreasing { index } => {
                write!(f, "evaluation grid is not strictly increasing at index {index}")
            }
            Error::LambdaGridTooShort { len } => {
                write!(f, "lambda grid needs at least 3 levels, got {len}")
            }
            Error::LambdaNotPositive { value } => {
                write!(f, "lambda levels must be > 0, got {value}")
            }
            Error::LambdaNotIncreasing { index } => {
                write!(f, "lambda grid is not strictly increasing at index {index}")
            }
            Error::IllConditionedPlan { diagnostic } => {
                write!(
                    f,
                    "extrapolation design is numerically singular or unstable (diagnostic {diagnostic:e})"
                )
            }
            Error::BandwidthOverflow { sigma, h, min_h } => write!(
                f,
                "deconvoluting kernel overflows for sigma={sigma}, h={h}; use h >= {min_h:.6}"
            ),
            Error::InvalidBandwidth { h } => write!(f, "bandwidth must be positive and finite, got {h}"),
            Error::NonPositiveParameter { what, value } => {
                write!(f, "{what} must be > 0, got {value}")
            }
            Error::HeteroscedasticSample => write!(
                f,
                "sample has unequal error scales; use the adjusted deconvoluting kernel estimator"
            ),
            Error::TooFewObservations { n, min } => {
                write!(f, "need at least {min} observations, got {n}")
            }
            Error::DegenerateSample => {
                write!(f, "all observations identical: bandwidth would be zero")
            }
            Error::QuadratureNodesTooFew { nodes } => {
                write!(f, "quadrature needs at least 16 nodes, got {nodes}")
            }
            Error::InvalidSearchBounds { lower, upper } => {
                write!(f, "search bounds must satisfy 0 < lower < upper, got [{lower}, {upper}]")
            }
            Error::BoundaryMinimum { lambda1, lower, upper } => write!(
                f,
                "minimum {lambda1} lies on the boundary of [{lower}, {upper}]; widen the search bounds"
            ),
            Error::NonPositiveObjective { lambda1, value } => write!(
                f,
                "variance quadratic form is not positive at lambda1={lambda1} (got {value})"
            ),
            Error::MissingVariance => write!(f, "estimate carries no variance; compute it first"),
            Error::InvalidLevel { level } => {
                write!(f, "confidence level must be in (0, 1), got {level}")
            }
            Error::InvalidPlan { violations } => {
                write!(f, "invalid experiment plan: ")?;
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            Error::TooManyExclusions {
                estimator,
                excluded,
                replicates,
                first_cause,
            } => write!(
                f,
                "{estimator}: {excluded} of {replicates} replicates failed (more than 10%); first failure: {first_cause}"
            ),
        }
    }
}

impl core::error::Error for Error {}
