use thiserror::Error;

/// Errors raised by validation and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have at least one row")]
    EmptyMatrix,

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")]
    ConvergenceFailure { sweeps: usize, off_diagonal: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPd { min_eigenvalue: f64 },

    #[error("negative power {exponent} of a singular matrix (min eigenvalue {min_eigenvalue:e})")]
    SingularPower { exponent: f64, min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("trace is not 1 (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("{field} = {value} is outside its domain: {reason}")]
    DomainError { field: &'static str, value: f64, reason: &'static str },

    #[error("order 1 is not defined here (got {value})")]
    BetaOne { value: f64 },

    #[error("beta = {value} must lie in (0, 1)")]
    BetaOutOfRange { value: f64 },

    #[error("alpha = {value} is outside the allowed range {range}")]
    AlphaOutOfRange { value: f64, range: &'static str },

    #[error("alpha = 1 is not defined here")]
    AlphaOne,

    #[error("probability vector has no nonzero entry")]
    EmptySupport,

    #[error("entry {index} is negative ({value})")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("reference matrix is singular but alpha > 1 needs it invertible")]
    SigmaSingular,

    #[error("tr(rho^alpha sigma^(1-alpha)) = {value:e} is not positive")]
    TraceNonpositive { value: f64 },

    #[error("state carries no bipartite dimensions")]
    NotBipartite,

    #[error("marginal on A is singular (min eigenvalue {min_eigenvalue:e})")]
    MarginalSingular { min_eigenvalue: f64 },

    #[error("no optimizer restart converged (best spread {best_spread:e})")]
    OptimizerFailure { best_spread: f64 },

    #[error("rank {rank} is not in 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("{zeros} forced zeros leaves no support among {n} entries")]
    BadZeros { zeros: usize, n: usize },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonHermitianInput { .. } => "NonHermitianInput",
            Error::NonFinite { .. } => "NonFinite",
            Error::NotSquare { .. } => "NotSquare",
            Error::EmptyMatrix => "EmptyMatrix",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::NotPsd { .. } => "NotPsd",
            Error::NotPd { .. } => "NotPd",
            Error::SingularPower { .. } => "SingularPower",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::TraceNotOne { .. } => "TraceNotOne",
            Error::DomainError { .. } => "DomainError",
            Error::BetaOne { .. } => "BetaOne",
            Error::BetaOutOfRange { .. } => "BetaOutOfRange",
            Error::AlphaOutOfRange { .. } => "AlphaOutOfRange",
            Error::AlphaOne => "AlphaOne",
            Error::EmptySupport => "EmptySupport",
            Error::NegativeProbability { .. } => "NegativeProbability",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::SigmaSingular => "SigmaSingular",
            Error::TraceNonpositive { .. } => "TraceNonpositive",
            Error::NotBipartite => "NotBipartite",
            Error::MarginalSingular { .. } => "MarginalSingular",
            Error::OptimizerFailure { .. } => "OptimizerFailure",
            Error::BadRank { .. } => "BadRank",
            Error::BadZeros { .. } => "BadZeros",
            Error::UnknownSuite(_) => "UnknownSuite",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
