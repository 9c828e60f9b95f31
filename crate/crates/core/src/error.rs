//! Error type shared across the toolkit.

/// Errors produced by geometry construction, assembly and eigensolves.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A numeric argument is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A point or set lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested geometry is degenerate (zero measure, repeated vertices, ...).
    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    /// Mesh generation or validation failed.
    #[error("mesh error: {0}")]
    Mesh(String),

    /// An eigensolve did not reach the requested residual tolerance.
    #[error("eigensolver did not converge: {detail} (iterations: {iterations}, worst residual: {residual:.3e})")]
    SolverNoConvergence {
        detail: String,
        iterations: usize,
        residual: f64,
    },

    /// A linear solve hit a numerically singular pivot.
    #[error("singular factorization: {0}")]
    Singular(String),

    /// Malformed JSON configuration.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
