use thiserror::Error;

/// Everything that can go wrong in the engine.
///
/// Variants fall into three families that the command-line front end maps
/// onto exit codes: malformed input, violated preconditions, and internal
/// invariant breaches (which always indicate a bug).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive form")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("cone contains a line")]
    NotStronglyConvex,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("divisor is not Q-Cartier on cone {cone:?}")]
    NotQCartier { cone: Vec<usize> },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant breach: {0}")]
    Invariant(String),
}

impl Error {
    /// Exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ZeroVector | Error::Dimension(_) | Error::Malformed(_) | Error::InvalidFan(_) => 1,
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn breach(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
