use thiserror::Error;

/// Errors raised by state construction, channels, measures and roof optimization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("not Hermitian: max |a_jk - conj(a_kj)| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is not one: |tr - 1| = {deviation:e}")]
    TraceNotOne { deviation: f64 },

    #[error("state vector is not normalized: |norm^2 - 1| = {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("rank {rank} out of range 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("index order violated: need 1 <= j < k <= d, got j={j}, k={k}, d={dim}")]
    IndexOrder { j: usize, k: usize, dim: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("value {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("matrix is not an isometry: max |V V^dag - I| = {deviation:e}")]
    NotIsometry { deviation: f64 },

    #[error("Kraus operators are not complete: max |sum K^dag K - I| = {deviation:e}")]
    NotComplete { deviation: f64 },

    #[error("Kraus operator shapes disagree: {0}")]
    ShapeMismatch(String),

    #[error("ancilla dimension {dim_a} smaller than system dimension {dim_s}")]
    AncillaTooSmall { dim_s: usize, dim_a: usize },

    #[error("channel is not certified incoherent")]
    ChannelNotIncoherent,

    #[error("unknown or unusable objective: {0}")]
    BadObjective(String),

    #[error("invalid roof configuration: {0}")]
    InvalidConfig(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
