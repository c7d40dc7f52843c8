use thiserror::Error;

/// Failures raised by the library.
///
/// The first group are precondition violations on caller input; the second
/// group are numerical failures of an otherwise valid request.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0}")]
    InvalidParameter(String),

    #[error("energy {epsilon} is below the Gaussian floor {floor}")]
    BelowFloor { epsilon: f64, floor: f64 },

    #[error("stationary state, period undefined")]
    Stationary,

    #[error("weak-coupling expansion broke down: {0}")]
    ExpansionBreakdown(String),

    #[error("step size underflow at t = {t} (stiff or invalid state)")]
    StepSizeUnderflow { t: f64 },

    #[error("not converged: {0}")]
    NotConverged(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by caller input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter(_) | Error::BelowFloor { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
