use thiserror::Error;

/// Errors shared across all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix or amplitude entry is NaN or infinite.
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    /// Hermiticity residual exceeds the requested tolerance.
    #[error("matrix is not Hermitian (residual {residual:.3e} > tol {tol:.3e})")]
    NotHermitian { residual: f64, tol: f64 },

    /// A vector with norm below the representable threshold cannot be
    /// normalized.
    #[error("cannot normalize a (near-)zero vector (norm {0:.3e})")]
    ZeroVector(f64),

    /// Amplitude count does not match the product of factor dimensions.
    #[error("amplitude length {got} does not match product of dims {expected}")]
    ShapeMismatch { got: usize, expected: usize },

    /// The two sides of a bipartition do not partition the party set.
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    /// Unitarity residual exceeds tolerance.
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    /// Operator or vector dimension incompatible with the target slot.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// More correlated-state coefficients than a factor dimension allows.
    #[error("{coeffs} coefficients exceed factor dimension {dim}")]
    CoeffsExceedDimension { coeffs: usize, dim: usize },

    /// Weights fail their normalization constraint.
    #[error("weights not normalized (deviation {0:.3e})")]
    NotNormalized(f64),

    /// The multipartite existence test needs at least three parties.
    #[error("need at least 3 parties, got {0}")]
    TooFewParties(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
