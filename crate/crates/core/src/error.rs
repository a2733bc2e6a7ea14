use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("circuit search exceeded its budget of {budget} steps")]
    BudgetExceeded { budget: u64 },

    #[error("operation requires a regular graph: {0}")]
    NotRegular(String),

    #[error("rank {0} is too small: the free group must have rank at least 2")]
    RankTooSmall(usize),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown dart `{0}`")]
    UnknownDart(String),

    #[error("invalid ray: {0}")]
    InvalidRay(String),

    #[error("the identity has no axis")]
    IdentityWord,

    #[error("cylinder depths differ: {0} vs {1}")]
    DepthMismatch(usize, usize),

    #[error("identity {identity} fails on cylinder {cylinder}")]
    CkIdentity { identity: String, cylinder: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
