//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Errors carry a stable
//! [`Error::code`] used by the command-line interface as its process exit
//! code, so the variants are deliberately coarse:
//!
//! * `Domain` (code 3) — an argument lies outside the mathematical domain of
//!   the requested operation (e.g. `r ≤ 2`, a pole of a hypergeometric
//!   series, a non-terminating series at `|x| ≥ 1`).
//! * `Range` (code 3) — the exact value exists but overflows the working
//!   precision (callers should switch to a logarithmic variant).
//! * `Convergence` (code 3) — the argument is admissible but the iteration
//!   budget was exhausted before the certified tail bound reached the target.
//! * `Resource` (code 3) — a guard against accidentally huge allocations.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Error type for all numeric operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain: {0}")]
    Domain(String),

    /// Result overflows the working precision (use a log-space variant).
    #[error("range: {0}")]
    Range(String),

    /// Iteration budget exhausted before reaching the requested tolerance.
    #[error("convergence: {0}")]
    Convergence(String),

    /// Refused to allocate or iterate beyond a safety guard.
    #[error("resource: {0}")]
    Resource(String),
}

impl Error {
    /// Stable numeric code (the command-line tool exits with this value).
    pub fn code(&self) -> u8 {
        3
    }

    /// Convenience constructor for domain errors.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Convenience constructor for precision-overflow errors.
    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    /// Convenience constructor for convergence errors.
    pub fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    /// Convenience constructor for resource-guard errors.
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

/// Validates the stability parameter `r > 2` shared by every density
/// operation. A small positive margin is required so that `1 − 4/r²` and
/// `√(r² − 4)` stay bounded away from zero in f64.
pub fn check_r(r: f64) -> Result<()> {
    const MIN_MARGIN: f64 = 1e-6;
    if !r.is_finite() {
        return Err(Error::domain(format!("r must be finite, got {r}")));
    }
    if r < 2.0 + MIN_MARGIN {
        return Err(Error::domain(format!(
            "r must exceed 2 + 1e-6 for a stable density, got {r}"
        )));
    }
    Ok(())
}
