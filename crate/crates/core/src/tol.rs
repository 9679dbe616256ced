//! Default tolerances. Routines that depend on one of these take it as an
//! argument where callers plausibly need to override it.

/// Orthonormality of stored frames (Gram matrix vs identity).
pub const GRAM: f64 = 1e-12;
/// Relative singular-value cutoff for numerical rank.
pub const RANK: f64 = 1e-10;
/// Jordan-angle clustering tolerance, measured on the cos²θ scale.
pub const CLUSTER: f64 = 1e-8;
/// Threshold below which w counts as non-positive.
pub const W_POSITIVE: f64 = 1e-12;
/// sinθ and cosθ must both exceed this for Φ_θ to be built.
pub const ANGLE_GUARD: f64 = 1e-6;
/// Below this value of sinθ·cosθ the anti-involution is assembled from matched
/// singular-vector pairs instead of the sec·csc projection formula.
pub const PHI_FORMULA_SWITCH: f64 = 1e-3;
/// Angles with sinθ under this floor are treated as exact zeros when aligning bases.
pub const ZERO_ANGLE_SIN: f64 = 1e-13;
/// Default finite-difference step on O(1)-scaled charts.
pub const FD_STEP: f64 = 1e-4;
/// Smallest admissible Jacobian singular value.
pub const JACOBIAN_RANK: f64 = 1e-8;
/// Absolute tolerance for spectral symmetry in the austere predicate.
pub const AUSTERE: f64 = 1e-8;
