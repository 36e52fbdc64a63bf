use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments do not conform to the group or object they are used with.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("numeric non-convergence: {msg} (achieved bound {achieved:e})")]
    NonConvergence { msg: String, achieved: f64 },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) => 3,
            Error::NonConvergence { .. } => 4,
            _ => 2,
        }
    }
}
