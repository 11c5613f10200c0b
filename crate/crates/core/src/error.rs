use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("block ({row}, {col}) has dimension {found}, expected {expected}")]
    RaggedBlock {
        row: usize,
        col: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid structured spec: {0}")]
    InvalidSpec(String),

    #[error("vector norm {0} is not 1")]
    NotUnit(f64),

    #[error("|q| = {0} lies outside [0, 1]")]
    QOutOfRange(f64),

    /// In dimension one, `<x, y> = q` with unit `x`, `y` forces `|q| = 1`.
    #[error("q-numerical range is empty in dimension 1 when |q| = {0} < 1")]
    EmptyRange(f64),

    #[error("q = 0 is not admissible here: the upper-bound factor is unbounded")]
    ZeroQ,

    #[error("empty block list")]
    EmptyBlocks,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
