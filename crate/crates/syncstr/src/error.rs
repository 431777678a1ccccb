use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: left q={left}, right q={right}")]
    AlphabetMismatch { left: u128, right: u128 },

    #[error("symbol {symbol} out of range for alphabet of size {alphabet_size}")]
    SymbolOutOfRange { symbol: u128, alphabet_size: u128 },

    #[error("edit op at position {pos} out of range (length {len})")]
    OpOutOfRange { pos: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("decode failed: {0}")]
    DecodeFailed(String),

    #[error("malformed input at line {line}, token {token}: {reason}")]
    Format {
        line: usize,
        token: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
