//! Default tolerances used throughout the crate.
//!
//! All thresholds are relative: a singular value is kept iff
//! `σ > tol · σ_max`, and two weights are degenerate iff
//! `|λ_i − λ_j| ≤ deg_tol · λ_max`. Absolute thresholds fail across
//! scales.

/// Rank / zero-space cutoff relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-10;

/// Degeneracy grouping threshold relative to the largest weight.
///
/// Looser than [`RANK_TOL`] because eigenvalue splitting under an
/// `ε`-perturbation is `O(√ε)`.
pub const DEG_TOL: f64 = 1e-8;

/// Default verdict tolerance for multipartite tests; looser than the
/// bipartite tolerance because errors compound across recursion depth.
pub const MULTI_TOL: f64 = 1e-8;

/// Unitarity acceptance threshold for local basis changes.
pub const UNITARY_TOL: f64 = 1e-10;

/// Norm deviation accepted when a state claims to be normalized.
pub const NORM_TOL: f64 = 1e-12;
