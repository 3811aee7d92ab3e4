use thiserror::Error;

/// Errors raised by the matrix kernel, the state constructors and the
/// correlation measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (expected 2 or 4)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {op} got {left}x{left} and {right}x{right}")]
    DimensionMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not self-adjoint (max |m - m^dagger| = {asymmetry:e})")]
    NotSelfAdjoint { asymmetry: f64 },

    #[error("trace is {trace} (expected 1)")]
    TraceNotUnity { trace: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NegativeEigenvalue { min_eigenvalue: f64 },

    #[error("matrix is singular (eigenvalue {eigenvalue:e}); logarithm undefined")]
    Singular { eigenvalue: f64 },

    #[error("Jacobi eigenvalue iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state is not pure (largest eigenvalue {largest_eigenvalue})")]
    NotPure { largest_eigenvalue: f64 },

    #[error("measurement branch has probability {probability:e}; conditional state undefined")]
    DegenerateBranch { probability: f64 },

    #[error("invalid optimization settings: {0}")]
    InvalidSettings(String),

    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
