//! Numerics for the spectral density `f(z1, z2) = 1 / (p(z1, z2) · conj-reciprocal p)`
//! of the stable bivariate polynomial `p(z1, z2) = 1 − (z1 + z2)/r` with `r > 2`.
//!
//! The crate computes the Fourier (autocorrelation) coefficients
//! `c_{k1,k2}(r) = (2π)^{-2} ∬ f · e^{-i(k1·θ + k2·φ)} dθ dφ`
//! through closed forms, series and quadrature oracles, hypergeometric
//! machinery (Gauss 2F1 / 3F2 evaluation, contiguous relations, Pfaff and
//! quadratic transformations, reduction of the 3F2 to 2F1s), large-parameter
//! asymptotic expansions with explicit error bounds, diagonal-limit regime
//! classification, and an orthonormal polynomial family attached to the
//! density.
//!
//! Modules are layered bottom-up:
//!
//! * [`error`] — the crate-wide error type and reason codes.
//! * [`precision`] — an `f64`/double-double abstraction for the few places
//!   where catastrophic cancellation exceeds f64.
//! * [`format`] — deterministic 17-significant-digit rendering used by all
//!   serialization paths.
//! * [`hypergeom`] — Pochhammer symbols, 2F1/3F2 summation with certified
//!   truncation tails, identities and reductions.
//! * [`bernoulli`] — generalized Bernoulli (Nørlund) numbers and the
//!   polynomial tables the large-parameter expansion consumes.
//! * [`largeparam`] — `2F1(1, βt+1; t+1; x)`-type limits, asymptotic series
//!   with rigorous remainder bounds, and square-root correction coefficients.
//! * [`coeffs`] — the Fourier coefficients themselves: closed forms, series
//!   and quadrature oracles, grids, and the defining recurrence.
//! * [`asymptotics`] — diagonal-ray regime classification and scaled limits,
//!   central binomial-type diagonal expansions, smooth-point geometry.
//! * [`orthopoly`] — the orthonormal family and Gram-matrix verification.
//! * [`verify`] — seeded randomized identity suites producing check reports.

pub mod asymptotics;
pub mod bernoulli;
pub mod coeffs;
pub mod error;
pub mod format;
pub mod hypergeom;
pub mod largeparam;
pub mod orthopoly;
pub mod precision;
pub mod verify;

pub use error::{Error, Result};
pub use precision::Precision;
