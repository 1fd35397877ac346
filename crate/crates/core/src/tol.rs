//! Numerical tolerances.
//!
//! Every exact-zero test in the theory becomes `|x| <= ZERO`. Functions that
//! depend on it have a `*_with` variant taking an explicit threshold.

/// Unit-norm tolerance on `sum |amplitude|^2`.
pub const NORM: f64 = 1e-10;
/// Threshold below which an overlap or amplitude counts as zero.
pub const ZERO: f64 = 1e-9;
/// Hermiticity and trace tolerance for density operators.
pub const HERMITIAN: f64 = 1e-10;
/// Smallest admissible eigenvalue of a density operator.
pub const PSD: f64 = -1e-8;
/// Gram-matrix tolerance for orthonormal bases.
pub const ORTHONORMAL: f64 = 1e-10;
/// `|<a|f>| > 1 - PARALLEL` means the two unit vectors are parallel.
pub const PARALLEL: f64 = 1e-9;
/// Tolerance on `|<a|b>| = 1/sqrt(d)` for mutual unbiasedness.
pub const UNBIASED: f64 = 1e-9;
/// Tolerance of the bound-saturation flag.
pub const SATURATION: f64 = 1e-8;
/// Max-entry norm below which a commutator vanishes.
pub const COMMUTATOR: f64 = 1e-9;
/// Witnesses refuse overlaps within this margin of 0 or 1.
pub const NEAR_DEGENERATE: f64 = 1e-6;
/// Slack on sum and magnitude invariants of distributions.
pub const DISTRIBUTION: f64 = 1e-9;
