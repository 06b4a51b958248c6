use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The simplex ran out of iterations. This is a numerical failure, not a
    /// statement about the problem.
    #[error("simplex iteration limit of {0} reached")]
    IterationLimit(usize),

    /// A verdict: the requested coverage (or policy class) is impossible.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An LP that should be bounded came back unbounded.
    #[error("unbounded: {0}")]
    Unbounded(String),

    /// A signal left the envelope a dispatch policy can serve.
    #[error("coverage violation at period {period}: {detail}")]
    CoverageViolation { period: usize, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }

    /// Process exit code used by the command-line front-end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) | Error::CoverageViolation { .. } => 2,
            Error::Precondition(_) | Error::InvalidInput(_) => 3,
            Error::IterationLimit(_) | Error::Unbounded(_) => 4,
        }
    }
}
