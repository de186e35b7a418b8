use thiserror::Error;

/// Errors raised across the crate.
///
/// The split between validation failures and budget exhaustion is load-bearing:
/// the CLI maps the former to exit code 2 and the latter to exit code 3.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid N-step: {0}")]
    InvalidStep(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("N-step {0} is not part of the step set")]
    UnknownStep(String),

    #[error("index {index} out of range (table holds lengths 0..={max})")]
    OutOfRange { index: usize, max: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("series division by a series that is zero to the known precision")]
    DivisionByZero,

    #[error("series square root needs a positive rational square leading coefficient and even valuation: {0}")]
    NotASquare(String),

    #[error("generating function has negative valuation {0}")]
    NegativeValuation(i64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
