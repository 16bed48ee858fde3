use thiserror::Error;

/// Errors shared by the grid, rule, imaging, and evaluation modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Grids and images must be at least 1x1.
    #[error("dimensions must be at least 1x1, got {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },

    /// Sampling is only defined inside the grid plus a one-cell ghost ring.
    #[error("index ({row}, {col}) lies outside the ghost ring of a {width}x{height} grid")]
    OutOfRange {
        row: isize,
        col: isize,
        width: usize,
        height: usize,
    },

    /// Cellwise operations require equal dimensions.
    #[error("shape mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    ShapeMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    /// Linear rules are numbered 0..=511.
    #[error("rule number {0} is outside 0..=511")]
    InvalidRule(u32),

    /// Row lists must be rectangular.
    #[error("row {row} has {got} cells, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },

    /// Row lists may only contain 0 or 1.
    #[error("cell ({row}, {col}) has non-binary value {value}")]
    NonBinaryCell { row: usize, col: usize, value: u8 },

    /// Malformed byte stream (PNM files, grid fixture text).
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// The request itself is invalid (incompatible format, empty rule list, ...).
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Error::Usage(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
