//! CLI error type: every failure carries a machine-parsable category that
//! maps one-to-one onto an exit code.

use std::fmt;

use deconv_core::Error as CoreError;

/// Failure category, printed as `error[<category>]: ...` on stderr.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Unreadable, malformed, or invalid input (exit code 2).
    Input,
    /// Numerical failure such as an overflow guard or an inconclusive
    /// search (exit code 3).
    Numerical,
    /// An internal invariant broke (exit code 4).
    Internal,
}

impl ErrorCategory {
    pub fn exit_code(&self) -> i32 {
        match self {
            ErrorCategory::Input => 2,
            ErrorCategory::Numerical => 3,
            ErrorCategory::Internal => 4,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCategory::Input => "input",
            ErrorCategory::Numerical => "numerical",
            ErrorCategory::Internal => "internal",
        }
    }
}

/// A categorized CLI failure.
#[derive(Debug)]
pub struct CliError {
    category: ErrorCategory,
    detail: String,
}

impl CliError {
    pub fn input(detail: impl Into<String>) -> Self {
        CliError {
            category: ErrorCategory::Input,
            detail: detail.into(),
        }
    }

    pub fn numerical(detail: impl Into<String>) -> Self {
        CliError {
            category: ErrorCategory::Numerical,
            detail: detail.into(),
        }
    }

    pub fn internal(detail: impl Into<String>) -> Self {
        CliError {
            category: ErrorCategory::Internal,
            detail: detail.into(),
        }
    }

    pub fn category(&self) -> ErrorCategory {
        self.category
    }

    pub fn exit_code(&self) -> i32 {
        self.category.exit_code()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.detail)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let category = match &e {
            CoreError::BandwidthOverflow { .. }
            | CoreError::IllConditionedPlan { .. }
            | CoreError::NonPositiveObjective { .. }
            | CoreError::BoundaryMinimum { .. }
            | CoreError::TooManyExclusions { .. } => ErrorCategory::Numerical,
            CoreError::MissingVariance => ErrorCategory::Internal,
            _ => ErrorCategory::Input,
        };
        CliError {
            category,
            detail: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}
