use thiserror::Error;

/// Errors raised by the geometric and transport layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular")]
    Singular,
    #[error("unbounded")]
    Unbounded,
    #[error("degenerate")]
    Degenerate,
    #[error("not reflexive (origin)")]
    NotReflexiveOrigin,
    #[error("not reflexive (offset)")]
    NotReflexiveOffset,
    #[error("height not admissible for facet structure")]
    HeightNotAdmissible,
    #[error("non-integral affine lattice")]
    NonIntegralAffineLattice,
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Process exit code: 1 for parse errors, 3 for I/O, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 1,
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
