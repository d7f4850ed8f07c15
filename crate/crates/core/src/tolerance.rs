//! Numeric tolerances shared by every module.

/// Maximum entrywise error of `V diag(λ) Vᵀ` against the input matrix.
pub const RECONSTRUCTION: f64 = 1e-11;

/// Maximum entrywise error of `U†U` against the identity.
pub const UNITARITY: f64 = 1e-10;

/// Phase distance below which two unitaries are considered equivalent.
pub const EQUIVALENCE: f64 = 1e-9;

/// Entrywise slack used when classifying a step unitary by its structure.
pub const CLASSIFICATION: f64 = 1e-9;

/// Residual allowed when recognising `λ / ‖A‖` as a small rational.
pub const RATIONAL_RESIDUAL: f64 = 1e-9;

/// Largest denominator tried when recognising eigenvalue ratios.
pub const RATIONAL_MAX_DEN: i64 = 16;

/// Spectral norm below which a graph is treated as edgeless and loopless.
pub const ZERO_NORM: f64 = 1e-12;
