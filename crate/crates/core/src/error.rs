use crate::poly::Polynomial;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial degree {degree} too small, need at least {min}")]
    DegreeTooSmall { degree: usize, min: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Cauchy nodes d1[{row}] and d2[{col}] collide (distance {distance:.3e})")]
    NodeCollision { row: usize, col: usize, distance: f64 },

    #[error("matrix is singular to working precision (rank {rank}, corank {corank})")]
    Singular { rank: usize, corank: usize },

    #[error("matrix has full rank, no null vector")]
    FullRank,

    #[error("Gauss-Newton diverged; best residual {best_residual:.3e}")]
    Diverged {
        best_residual: f64,
        best_g: Polynomial,
        best_v: Polynomial,
    },

    #[error(
        "Jacobian rank collapsed to {rank} of {rows} rows; re-estimate the gcd degree with another rank tolerance"
    )]
    JacobianRankCollapse { rank: usize, rows: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
