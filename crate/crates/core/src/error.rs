use thiserror::Error;

use crate::linalg::SingularPair;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("vector is identically zero")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        best: Box<(SingularPair, SingularPair)>,
    },

    #[error("matrix has numerical rank below 2 (sigma2 = {sigma2:e}, sigma1 = {sigma1:e})")]
    RankDeficient { sigma1: f64, sigma2: f64 },

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("vector has a non-real coordinate at index {0}")]
    NotReal(usize),

    #[error("problem size {size} exceeds enumeration cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop at vertex {vertex} on line {line}")]
    LoopRejected { line: usize, vertex: usize },

    #[error("subset is empty")]
    EmptySubset,

    #[error("graph has no edges")]
    EmptyGraph,

    /// A certified bound failed to hold. This is a bug signal, not a user error.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroMatrix => "ZeroMatrix",
            Error::ZeroVector => "ZeroVector",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::NotHermitian => "NotHermitian",
            Error::NotReal(_) => "NotReal",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::OutOfRange(_) => "OutOfRange",
            Error::Parse { .. } => "ParseError",
            Error::LoopRejected { .. } => "LoopRejected",
            Error::EmptySubset => "EmptySubset",
            Error::EmptyGraph => "EmptyGraph",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
