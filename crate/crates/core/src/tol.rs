//! Numerical tolerances shared across the crate.

/// Hermiticity check, relative to `1 + max|A|`.
pub const HERM_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as exact zeros.
pub const PSD_TOL: f64 = 1e-10;
/// Reconstruction and unitarity of spectral decompositions.
pub const RECON_TOL: f64 = 1e-9;
/// Inequality checks, applied after normalising the slack by `1 + |rhs|`.
pub const CHAIN_TOL: f64 = 1e-8;
/// Equality-manifold detection.
pub const EQ_TOL: f64 = 1e-7;
/// Entries or eigenvalues at or below this are structural zeros.
pub const ZERO_THRESHOLD: f64 = 1e-12;
/// Accuracy of numerically minimised quantities.
pub const OPT_TOL: f64 = 1e-4;
/// Allowed deviation of a distribution or density matrix from unit mass.
pub const UNIT_TRACE_TOL: f64 = 1e-10;
/// `|beta - 1|` below this is treated as `beta = 1`.
pub const BETA_ONE_TOL: f64 = 1e-9;
