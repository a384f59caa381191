use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("maximal minors need rows >= cols, got {rows}x{cols}")]
    TooFewRows { rows: usize, cols: usize },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partitions have different sizes {left} and {right}")]
    UnequalTotals { left: usize, right: usize },

    #[error("invalid rank sequence: {0}")]
    InvalidRankSequence(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("subspace is not invariant under the shift")]
    NotInvariant,

    #[error("framed pair is not stable")]
    Unstable,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("W matrix is not symmetric; input is not a point of X_(2,m)")]
    AsymmetricW,

    #[error("matrix is not in sp(2n)")]
    NotSymplecticAlgebra,

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
