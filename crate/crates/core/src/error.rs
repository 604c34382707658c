use thiserror::Error;

/// Errors produced by the numerical and geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested proper distance does not lie inside the simultaneity slice.
    #[error("rho={rho} lies outside the simultaneity slice at tau={tau}: rho_M(tau)={rho_max}")]
    OutOfSlice { tau: f64, rho: f64, rho_max: f64 },

    /// The event is outside the (local) Fermi chart.
    #[error("outside the Fermi chart: {0}")]
    OutOfChart(String),

    /// Only k = 0 and k = -1 are supported.
    #[error("unsupported spatial curvature k={0}; only k=0 and k=-1 are supported")]
    UnsupportedCurvature(i32),

    /// A root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// An iterative method ran out of budget before meeting its tolerance.
    #[error("accuracy error: {message} (estimate={estimate}, error bound={error_bound})")]
    Accuracy {
        message: String,
        estimate: f64,
        error_bound: f64,
    },

    /// An internal consistency check failed (e.g. a negative radicand).
    #[error("consistency error: {0}")]
    Consistency(String),

    /// Input data failed validation.
    #[error("invalid input at index {index}: {message}")]
    Validation { index: usize, message: String },

    /// Input could not be read or parsed.
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for accuracy (non-convergence) failures, false for everything else.
    pub fn is_accuracy(&self) -> bool {
        matches!(self, Error::Accuracy { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
