use std::io;

use thiserror::Error;

/// Failures of the file formats and image utilities.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("bad magic bytes {0:?}, expected \"T3F1\"")]
    BadMagic([u8; 4]),
    #[error("truncated input: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("tensor of size {n1}x{n2}x{n3} does not fit in memory")]
    DimensionOverflow { n1: u64, n2: u64, n3: u64 },
    #[error("{extra} unexpected bytes after the payload")]
    TrailingBytes { extra: usize },
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed image header: {0}")]
    MalformedHeader(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("reference tensor is zero")]
    ZeroReference,
    #[error(transparent)]
    Tensor(#[from] trpca_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;
