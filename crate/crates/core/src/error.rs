use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("scale factor {value} at position {index} is not positive and finite")]
    NonPositiveFactor { index: usize, value: f64 },

    #[error("canonical scaling did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("singular value decomposition did not converge")]
    SvdFailed,

    #[error("method mismatch: {0}")]
    MethodMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("entry ({row}, {col}) has a zero constant denominator term")]
    ZeroDenominator { row: usize, col: usize },

    #[error("entry ({row}, {col}) has a pole at the evaluation point")]
    Pole { row: usize, col: usize },

    #[error("missing unit tags: {0}")]
    MissingUnits(String),

    #[error("assignment is infeasible: {0}")]
    Infeasible(String),
}

impl Error {
    /// True for errors caused by malformed or inconsistent input rather
    /// than by a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::ShapeMismatch { .. }
                | Error::NonPositiveFactor { .. }
                | Error::Parse { .. }
                | Error::ZeroDenominator { .. }
                | Error::MissingUnits(_)
        )
    }
}
