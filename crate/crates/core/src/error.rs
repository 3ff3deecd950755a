use thiserror::Error;

/// Errors produced by the array, field and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NffError {
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("observation point coincides with element {index}")]
    CoincidentPoint { index: usize },

    #[error("empty range [{start}, {stop}]")]
    EmptyRange { start: f64, stop: f64 },

    #[error("degenerate grid: {nx} x {ny} samples")]
    DegenerateGrid { nx: usize, ny: usize },

    #[error("non-finite input {0}")]
    NonFinite(f64),

    #[error("{0} requires a full-circle array")]
    RequiresFullCircle(&'static str),

    #[error(
        "quadrature did not converge on [{lower}, {upper}]: estimate {estimate:e}, error {error:e}"
    )]
    QuadratureNotConverged {
        lower: f64,
        upper: f64,
        estimate: f64,
        error: f64,
    },
}

pub type Result<T, E = NffError> = std::result::Result<T, E>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> NffError {
    NffError::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
