use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `Input` covers malformed data (it is never an axiom failure); the other
/// variants are numeric or structural failures of a computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("power iteration for label {label} did not converge after {iterations} iterations")]
    NoConvergence { label: usize, iterations: usize },

    #[error("Verlinde entry N[{i}][{j}][{k}] = {value} is not within {tolerance} of a nonnegative integer")]
    NonIntegral {
        i: usize,
        j: usize,
        k: usize,
        value: f64,
        tolerance: f64,
    },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("refused: {what} needs {required} evaluations, limit is {limit}")]
    Infeasible {
        what: String,
        required: u128,
        limit: u128,
    },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("element lies outside the algebra (distance {distance:.3e})")]
    OutsideAlgebra { distance: f64 },

    #[error("character table computation failed after {attempts} attempts: {reason}")]
    CharacterTable { attempts: usize, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors caused by bad input rather than by a failed computation.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Json(_) | Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
