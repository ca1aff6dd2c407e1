//! Numerical tolerances shared across the crate.

/// Normalisation of probability vectors and traces.
pub const VALIDATION: f64 = 1e-9;

/// Entries in `[-CLAMP, 0)` are rounded up to zero; anything more negative is rejected.
pub const CLAMP: f64 = 1e-12;

/// Default slack for curve and majorisation comparisons.
pub const ORDER_EPS: f64 = 1e-9;

/// Hermiticity check for density matrices.
pub const HERMITIAN: f64 = 1e-10;

/// Smallest eigenvalue accepted for a density matrix.
pub const PSD: f64 = 1e-9;

/// Entries below this count as zero when computing supports (`x_i != 0`).
pub const SUPPORT: f64 = 1e-12;

/// Largest accepted `beta * (E_max - E_min)`; beyond it Gibbs weights underflow.
pub const MAX_LOG_GIBBS_RATIO: f64 = 700.0;
