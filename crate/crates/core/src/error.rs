use thiserror::Error;

/// Errors produced by the library. Every fallible operation returns one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("prefix {0} is not a node of the tree")]
    NotInTree(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("game is empty")]
    EmptyGame,

    #[error("invalid strike set: {0}")]
    InvalidStrikeSet(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("not in domain: {0}")]
    NotInDomain(String),

    #[error("not supported: {0}")]
    NotSupported(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
