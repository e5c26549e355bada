//! Text formats for databases, profit tables and mined patterns, and the
//! synthetic database generator.
//!
//! Sequence file, one q-sequence per line:
//!
//! ```text
//! 1:5 3:2 7:5 -1 1:3 2:1 3:3 6:2 -1 2:3 4:2 5:2 -1 -2
//! ```
//!
//! `ITEM:QTY` tokens, `-1` closes an itemset, `-2` ends the sequence. The
//! profit file holds one `ITEM PROFIT` pair per line. Lines starting with `#`
//! are comments in both.

mod format;
mod generate;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

pub use format::{
    parse_database, parse_patterns, parse_profits, sort_patterns, write_patterns, write_profits, write_sequences,
};
pub use generate::{generate_database, GeneratorConfig};

use crate::error::{Error, Result};
use crate::qseq::QSequenceDatabase;

/// Opens and parses a sequence file and its profit file.
pub fn load_database(sequences: &Path, profits: &Path) -> Result<QSequenceDatabase> {
    let open = |p: &Path, what: &str| {
        File::open(p).map(BufReader::new).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{what} not found: {}: {e}", p.display())))
        })
    };
    let s = open(sequences, "sequence file")?;
    let p = open(profits, "profit table")?;
    parse_database(s, p)
}
