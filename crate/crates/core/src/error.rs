use thiserror::Error;

/// Errors produced by the library.
///
/// Domain errors (ordering, approximation, resolution, unreachable) mean the
/// request was well formed but the answer is "no"; the remaining variants
/// signal malformed input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ordering precondition violated: {0}")]
    Ordering(String),

    #[error("rational approximation too coarse (approx_error = {approx_error:e}): {reason}")]
    Approximation { approx_error: f64, reason: String },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("unreachable target: {0}")]
    Unreachable(String),

    #[error("rate is unbounded: target distribution is uniform")]
    UnboundedRate,
}

impl Error {
    /// Stable identifier used by the CLI when reporting errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Ordering(_) => "OrderingError",
            Error::Approximation { .. } => "ApproximationError",
            Error::Resolution(_) => "ResolutionError",
            Error::Unreachable(_) => "UnreachableError",
            Error::UnboundedRate => "UnboundedRate",
        }
    }

    /// True for errors that describe a well-posed question whose answer is
    /// negative, as opposed to malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Ordering(_)
                | Error::Approximation { .. }
                | Error::Resolution(_)
                | Error::Unreachable(_)
                | Error::UnboundedRate
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
