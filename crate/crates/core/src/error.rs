// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the library.
///
/// The variants line up with the CLI exit-code contract: `Construction`
/// maps to exit code 3; every other variant is a usage or domain failure
/// (exit code 1). Analytic/numerical disagreement is not an error, it is
/// reported through [`crate::choi::ClassificationReport::all_agree`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("matrix is not Hermitian within tolerance (max |M - M*| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }
}
