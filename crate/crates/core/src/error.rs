use std::io;

use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one process exit code
/// (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration needs {required} subsets but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("singular covariance matrix: {0}")]
    Singular(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// 0 success, 2 config error, 3 budget refusal, 4 numeric failure; 1 for
    /// anything environmental (I/O).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Parse { .. } | Error::Json(_) => 2,
            Error::BudgetExceeded { .. } => 3,
            Error::Numeric(_) | Error::Singular(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
