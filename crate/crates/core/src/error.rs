use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} {value} out of range (valid: {valid})")]
    Range {
        what: &'static str,
        value: usize,
        valid: String,
    },

    #[error("cannot build over an empty input")]
    EmptyInput,

    #[error("symbol {symbol} outside alphabet [{lo}..{hi}]")]
    Alphabet { symbol: u64, lo: u64, hi: u64 },

    #[error("document {index} is empty")]
    EmptyDocument { index: usize },

    #[error("corpus contains no documents")]
    EmptyCorpus,

    #[error("separator byte 0x{byte:02x} occurs inside a document")]
    SeparatorCollision { byte: u8 },

    #[error("no byte value is free to act as a separator")]
    NoFreeSeparator,

    #[error("more than 2^32-1 distinct tokens")]
    VocabularyOverflow,

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("cell {pos} belongs to document {found}, not {expected}")]
    DocMismatch {
        pos: usize,
        expected: u32,
        found: u32,
    },

    #[error("expected {expected} weights, got {got}")]
    WeightDimensionMismatch { expected: usize, got: usize },

    #[error("weight of document {doc} is not a number")]
    InvalidWeight { doc: usize },

    #[error("unknown algorithm '{0}'")]
    UnknownAlgo(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed index file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn range(what: &'static str, value: usize, lo: usize, hi: usize) -> Self {
        Error::Range {
            what,
            value,
            valid: format!("{lo}..={hi}"),
        }
    }

    pub(crate) fn interval(sp: usize, ep: usize, n: usize) -> Self {
        Error::Range {
            what: "interval start",
            value: sp,
            valid: format!("1 <= sp <= ep <= {n}, got [{sp},{ep}]"),
        }
    }
}

/// Validates a 1-based closed interval `[sp, ep]` inside `1..=n`.
pub(crate) fn check_interval(sp: usize, ep: usize, n: usize) -> Result<()> {
    if sp == 0 || sp > ep || ep > n {
        Err(Error::interval(sp, ep, n))
    } else {
        Ok(())
    }
}
