//! Crate-wide error type and exit-code mapping.

use crate::numerics::ode::OdeError;
use crate::numerics::quad::QuadError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A mathematical precondition of an experiment does not hold (e.g. no embedded eigenvalue).
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
    /// A numerical procedure failed to converge or to meet its tolerance.
    #[error("non-convergence: {0}")]
    NonConvergence(String),
    /// Invalid configuration or parameters.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 2 hypothesis failure, 3 non-convergence, 4 configuration error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Hypothesis(_) => 2,
            Error::NonConvergence(_) | Error::Ode(_) | Error::Quad(_) => 3,
            Error::Config(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn nonconv(msg: impl Into<String>) -> Error {
    Error::NonConvergence(msg.into())
}
