//! Density deconvolution for data observed with additive, possibly
//! heteroscedastic Gaussian measurement error.
//!
//! The observation model is `y_j = x_j + u_j` with `u_j ~ N(0, sigma_j^2)`
//! and known per-observation error scales `sigma_j`. The goal is the density
//! of the unobserved `x`.
//!
//! * [`simex`] — the primary estimator: a variable-bandwidth kernel estimate
//!   evaluated on an increasing grid of error-inflation levels, combined by a
//!   closed-form quadratic-extrapolation weight row, with pointwise variance
//!   and confidence bands.
//! * [`fourier`] — reference estimators: the naive kernel density estimate,
//!   the deconvoluting kernel estimator for homoscedastic errors, and its
//!   heteroscedastic adjustment.
//! * [`kernels`] — the smoothing kernel, its characteristic function, and the
//!   Fourier-inverted deconvoluting kernels evaluated by quadrature.
//! * [`bandwidth`] — smoothing-parameter selection: a rule-of-thumb level and
//!   a variance-minimizing level.
//! * [`simlab`] — seeded Monte Carlo experiments comparing estimators by
//!   integrated squared error.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for builds without the standard library. File formats and
//! the command-line driver live in the companion `deconvolve` crate.
//!
//! ```
//! use deconv_core::bandwidth::{build_lambda_grid, select_lambda1_rot_unsquared,
//!                              LambdaSearchSpec, SCOTT_A0};
//! use deconv_core::model::{ContaminatedSample, EvaluationGrid};
//! use deconv_core::simex::{build_plan, simex_confidence_band, simex_estimate,
//!                          simex_variance};
//!
//! let y = vec![0.3, -1.1, 0.4, 1.7, -0.2, 0.9, -0.6, 2.1];
//! let sample = ContaminatedSample::with_common_sigma(y, 0.4)?;
//! let lambda1 = select_lambda1_rot_unsquared(&sample, SCOTT_A0)?;
//! let levels = build_lambda_grid(lambda1, &LambdaSearchSpec::default())?;
//! let plan = build_plan(&levels)?;
//! let eval = EvaluationGrid::linspace(-4.0, 4.0, 64)?;
//! let est = simex_estimate(&sample, &levels, &eval)?;
//! let variance = simex_variance(est.values(), &sample, &plan);
//! let est = simex_confidence_band(est.with_variance(variance)?, 0.95)?;
//! assert_eq!(est.values().len(), 64);
//! assert!(est.band().is_some());
//! # Ok::<(), deconv_core::Error>(())
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bandwidth;
pub mod error;
pub mod fourier;
pub mod kernels;
pub mod model;
pub mod rng;
pub mod simex;
pub mod simlab;

pub(crate) mod math;

pub use error::{Error, Result};
