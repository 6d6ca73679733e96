use thiserror::Error;

use crate::poly::Polynomial;

/// Errors raised by the exact and numeric layers.
///
/// Verification failures are not errors; they are reported through
/// [`crate::certificates::Verdict`]. Likewise a failed search is a value,
/// not an `Err`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("a finite domain needs an even number (at least 2) of roots, got {0}")]
    DomainArity(usize),

    #[error("reduced identity does not hold; residual {residual}")]
    ReconstructionPrecondition { residual: Polynomial },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
