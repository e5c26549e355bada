use std::fmt;

use crate::qseq::ItemId;

/// Which input a parse error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Sequences,
    Profits,
    Patterns,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Sequences => "sequence file",
            Source::Profits => "profit file",
            Source::Patterns => "pattern file",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{source_kind} line {line}: {reason}")]
    Parse {
        source_kind: Source,
        line: usize,
        reason: String,
    },

    #[error("no sequences")]
    NoSequences,

    #[error("invalid database: {0}")]
    InvalidDatabase(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("unknown item {0}: no profit entry")]
    UnknownItem(ItemId),

    #[error("quantity must be at least 1 (item {item}, got {qty})")]
    InvalidQuantity { item: ItemId, qty: u32 },

    #[error("item {item} does not extend the last itemset (last item {last})")]
    ExtensionOrder { item: ItemId, last: ItemId },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("utility overflow")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(source_kind: Source, line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            source_kind,
            line,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
