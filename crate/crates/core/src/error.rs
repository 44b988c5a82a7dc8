//! Error types shared by all statistics modules.

use thiserror::Error;

/// Errors produced by parameter validation and numerical evaluation.
#[derive(Debug, Clone, Error)]
pub enum FbError {
    /// A parameter is outside its admissible domain. Carries the
    /// offending field name and a human-readable constraint.
    #[error("domain error on `{field}`: {message}")]
    Domain { field: &'static str, message: String },

    /// An iterative scheme exhausted its term/level budget without
    /// meeting its tolerance.
    #[error("convergence failure in {context}: {message}")]
    Convergence { context: &'static str, message: String },

    /// A numerical evaluation produced an untrustworthy result
    /// (overflow, non-finite intermediate, failed sanity check).
    #[error("numerical error in {context}: {message}")]
    Numerical { context: &'static str, message: String },
}

impl FbError {
    pub fn domain(field: &'static str, message: impl Into<String>) -> Self {
        FbError::Domain { field, message: message.into() }
    }

    pub fn convergence(context: &'static str, message: impl Into<String>) -> Self {
        FbError::Convergence { context, message: message.into() }
    }

    pub fn numerical(context: &'static str, message: impl Into<String>) -> Self {
        FbError::Numerical { context, message: message.into() }
    }

    /// Field name for domain errors; used by the CLI to map errors to
    /// argument diagnostics.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            FbError::Domain { field, .. } => Some(field),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, FbError>;
