//! Schmidt-type representations of finite-dimensional multipartite pure
//! states.
//!
//! The library decides and constructs Schmidt representations at three
//! levels:
//!
//! - [`linalg`]: dense complex matrix primitives — Hermitian
//!   eigendecomposition, SVD in canonical (dyad-sum) form, polar
//!   decomposition `A = U ∘ |A|`, and numerical rank.
//! - [`state`]: multipartite pure states, matricization along a
//!   bipartition (the state ↔ operator correspondence), local unitary
//!   action, and seeded state generators.
//! - [`bipartite`]: the bipartite Schmidt decomposition obtained through
//!   the polar pipeline, reduced density matrices, entanglement entropy,
//!   and degeneracy reporting.
//! - [`multipartite`]: existence testing and construction of homogeneous
//!   Schmidt forms on three or more factors, product-state testing by
//!   rank peeling, and the pure-vs-mixture gap inequality.
//!
//! All operations are pure functions over immutable values and are safe
//! to share across threads. Randomness is always driven by an explicit
//! seed.

pub mod bipartite;
pub mod error;
pub mod linalg;
pub mod multipartite;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{
    hermitian_eig, numerical_rank, polar_decompose, svd, CMatrix, CVector,
    CanonicalRepresentation, HermitianEigenSystem, PolarDecomposition, C64,
};
pub use state::{
    apply_local_unitary, make_correlated_state, matricize, normalize, random_state, Bipartition,
    PureState, RandomSeed,
};
pub use bipartite::{
    degeneracy_report, entanglement_entropy, entropy_bits, expectation_consistency,
    reduced_density, schmidt_decompose, schmidt_decompose_with, DegeneracyReport, DensityMatrix,
    SchmidtDecomposition, Side,
};
pub use multipartite::{
    counting_check, counting_for_dims, generalized_schmidt_test, product_test,
    pure_vs_mixture_gap, CountingRecord, GeneralizedSchmidtResult, MixtureSpec, ProductTestResult,
    RankWitness, SchmidtWitness,
};
