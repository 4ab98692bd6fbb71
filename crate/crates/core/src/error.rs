use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0} (expected 2 or 4)")]
    UnsupportedDimension(usize),

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("vector is not normalized (norm {norm:.3e})")]
    NotUnitVector { norm: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("matrix is not diagonal (off-diagonal magnitude {0:.3e})")]
    NotDiagonal(f64),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("kronecker query has no phase constants")]
    EmptyQuery,

    #[error("kronecker query has {alphas} phase constants but {targets} targets")]
    LengthMismatch { alphas: usize, targets: usize },

    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("search cap must be at least 1")]
    InvalidSearchCap,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
