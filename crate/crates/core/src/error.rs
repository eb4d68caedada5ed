use std::fmt;

/// Why an index failed to scope-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScopeProblem {
    OutOfRange,
    KindMismatch,
}

impl fmt::Display for ScopeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScopeProblem::OutOfRange => write!(f, "out of range"),
            ScopeProblem::KindMismatch => write!(f, "kind mismatch"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("scope error at index {index}: {problem}")]
    Scope { index: usize, problem: ScopeProblem },
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("boundary mismatch under {branch}: {message}")]
    Boundary { branch: String, message: String },
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("not a pi type")]
    NotAPi,
    #[error("no branch of the system is entailed")]
    SystemCoverage,
    #[error("unsupported line: {0}")]
    UnsupportedLine(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("kan error: {0}")]
    Kan(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
