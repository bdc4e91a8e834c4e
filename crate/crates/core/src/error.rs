use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative dyadic level {0}")]
    NegativeLevel(i64),
    #[error("dyadic level {0} exceeds the supported maximum")]
    LevelTooDeep(i64),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite coefficient at level {v}")]
    NonFinite { v: u32 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("level {level} exceeds the grid bandwidth (max {max})")]
    Bandwidth { level: u32, max: u32 },
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("numerical divergence: {0}")]
    Divergent(String),
    #[error("hypothesis rejected: {0}")]
    Rejected(String),
    #[error("window construction failed: {0}")]
    Window(String),
}
