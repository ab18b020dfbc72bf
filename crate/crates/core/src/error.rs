use thiserror::Error;

/// Everything that can go wrong while building models, signals or running
/// simulations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input signal: {0}")]
    InvalidSignal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("step size underflow at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("non-finite state at t = {time}")]
    NonFinite { time: f64 },

    #[error("gamma = {gamma}: {source}")]
    AtGamma {
        gamma: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::StepUnderflow { .. } | Error::NonFinite { .. } => true,
            Error::AtGamma { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn at_gamma(self, gamma: f64) -> Self {
        Error::AtGamma {
            gamma,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
