use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("invalid rank {rank} for root family {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("unknown or unsupported lattice label `{0}`")]
    UnknownLabel(String),
    #[error("construction of {label} failed: {reason}")]
    ConstructionFailure { label: String, reason: String },
    #[error("matrix index is not positive semidefinite: {0}")]
    NotSemidefinite(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("expansion covers box {have} but {need} was requested")]
    BoxUnderflow { have: u32, need: u32 },
    #[error("shell of norm {norm} not available (enumerated to {bound})")]
    ShellMissing { norm: u32, bound: u32 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no cache entry for {0}")]
    CacheMiss(String),
    #[error("corrupt cache: {0}")]
    CorruptCache(String),
    #[error("transitivity assertion not verified: {0}")]
    AssertionUnverified(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
