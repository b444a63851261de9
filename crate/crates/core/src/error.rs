use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by grid construction, filtering and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid dimensions must be at least 1x1, got {width}x{height}")]
    EmptyGrid { width: usize, height: usize },

    #[error("expected {expected} values for a {width}x{height} grid, got {got}")]
    ValueCountMismatch {
        width: usize,
        height: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("dimension mismatch in {context}: expected {expected_width}x{expected_height}, got {width}x{height}")]
    DimensionMismatch {
        context: String,
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    #[error("an image stack needs at least 2 frames, got {got}")]
    StackTooSmall { got: usize },

    #[error("focus scores must be non-negative, got {value} at index {index}")]
    NegativeFocus { value: f64, index: usize },

    #[error("depth value {value} outside [0, {max}]")]
    DepthOutOfRange { value: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },

    #[error("correlation is undefined for constant input")]
    ConstantInput,

    #[error("file not found: {path}")]
    MissingFile { path: PathBuf },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    MalformedImage { path: PathBuf, reason: String },

    #[error("{path}: unsupported format: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
