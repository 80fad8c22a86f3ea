//! Command-line front end and file IO for the deconvolution library.
//!
//! Three subcommands cover the full workflow:
//!
//! * `estimate` — read a `y,sigma` CSV, fit one estimator, write the density
//!   (with variance and confidence band for the extrapolation method) plus a
//!   manifest of every resolved parameter;
//! * `simulate` — run a JSON experiment plan and write the summary as CSV
//!   and as an aligned text table;
//! * `bandwidth` — report the smoothing selections a sample would get.
//!
//! Outputs are pure functions of the inputs and the seed: repeated runs are
//! byte-identical, regardless of the thread count used for simulation.

pub mod args;
pub mod error;
pub mod io;
pub mod plan;
pub mod run;

pub use args::Cli;
pub use error::{CliError, ErrorCategory};
pub use run::{execute, run_plan_parallel};
