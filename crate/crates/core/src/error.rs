//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A truncated basis is too small for the requested construction.
    #[error("truncated basis too small: need cutoff >= {required}, have {cutoff}")]
    Truncation { required: usize, cutoff: usize },

    /// A constructed state loses too much norm to truncation.
    #[error("state loses {deficit:.3e} of its squared norm at cutoff {cutoff} (limit {limit:.1e}); increase the cutoff")]
    NormGuard {
        deficit: f64,
        cutoff: usize,
        limit: f64,
    },

    /// The matrix exponential series did not reach the requested tolerance.
    #[error("matrix exponential stalled at term norm {achieved:.3e} (tolerance {tol:.3e})")]
    Convergence { achieved: f64, tol: f64 },

    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("basis index {index} outside cutoff {cutoff}")]
    Index { index: usize, cutoff: usize },

    /// Pre- and post-selection overlap vanishes, so weak values are undefined.
    #[error("pre- and post-selection are orthogonal (alpha*epsilon = 0); weak values undefined")]
    OrthogonalPostselection,

    /// A quantity is undefined for the given parameters (e.g. SNR ratio at g = 0).
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    #[error("invalid range: {0}")]
    Range(String),

    #[error("invalid parameter: {0}")]
    Params(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numeric guard (truncation, norm loss, series
    /// convergence) as opposed to bad arguments or I/O.
    pub fn is_numeric_guard(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. } | Error::NormGuard { .. } | Error::Convergence { .. }
        )
    }
}
