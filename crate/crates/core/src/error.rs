//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Metric matrix is not symmetric positive definite.
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    /// A metric field could not be evaluated at the requested point.
    #[error("chart error: {0}")]
    ChartError(String),

    /// The spectral parameter sits too close to one of the two wave rays,
    /// so the principal symbol is numerically singular.
    #[error("spectral parameter within {threshold:.3e} of a symbol pole (|tau - c q| = {distance:.3e})")]
    PoleProximity { distance: f64, threshold: f64 },

    /// Invalid Lame parameters or other scalar preconditions.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A sign-change scan could not isolate a determinant root.
    #[error("root bracketing failed: {0}")]
    RootBracketFailure(String),

    /// Grid resolution below the supported minimum.
    #[error("discretization too coarse: grid_n = {grid_n}, minimum {minimum}")]
    DiscretizationTooCoarse { grid_n: usize, minimum: usize },

    /// Dense symmetric eigensolver did not converge.
    #[error("eigensolver failure: {0}")]
    EigensolverFailure(String),

    /// Spectrum file violates the format contract.
    #[error("malformed spectrum file at line {line}: {reason}")]
    MalformedFile { line: usize, reason: String },

    /// Spectrum file rows are not sorted ascending.
    #[error("spectrum not sorted ascending at line {line}")]
    SortedViolation { line: usize },

    /// The Weyl tail of the truncated spectrum dominates the requested
    /// heat-trace sample; use more eigenvalues or a larger time.
    #[error(
        "truncation dominated at t = {t:.3e}: tail bound {bound:.3e} exceeds 1e-3 of value {value:.3e}"
    )]
    TruncationDominated { t: f64, bound: f64, value: f64 },

    /// Weighted design matrix condition number above 1e12.
    #[error("ill-conditioned fit: condition number {condition:.3e}")]
    IllConditionedFit { condition: f64 },

    /// File I/O wrapper for spectrum export/import.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
