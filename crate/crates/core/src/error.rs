//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the simulation and feature-extraction pipeline.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A configuration value violates its documented invariant.
    #[error("invalid config: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    /// Input dimensions do not line up with what the operation expects.
    #[error("dimension mismatch in {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// An operation received an empty collection where at least one
    /// element is required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Input is degenerate for this operation (e.g. an all-zero cube
    /// has no defined signal power).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

impl CoreError {
    pub fn invalid_config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CoreError::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
