//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors reported by design construction, certification and search.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimension outside the supported range (e.g. Gell-Mann basis for d < 2).
    InvalidDimension(usize),
    /// Two inputs that must share a dimension do not.
    DimensionMismatch { expected: usize, got: usize },
    /// Input violates a documented precondition (message explains which).
    InvalidInput(String),
    /// A matrix contract was violated (non-Hermitian, non-unitary, ...);
    /// carries the offending residual.
    ContractViolation { what: &'static str, residual: f64 },
    /// Parameter lies outside an admissible analytic window.
    DomainError(String),
    /// Requested size overflows the configured/integer limits.
    RangeError(String),
    /// A numeric construction found no admissible solution.
    ConstructionError(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(d) => write!(f, "invalid dimension: {d}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::ContractViolation { what, residual } => {
                write!(f, "contract violation: {what} (residual {residual:.3e})")
            }
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::RangeError(msg) => write!(f, "range error: {msg}"),
            Error::ConstructionError(msg) => write!(f, "construction error: {msg}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
