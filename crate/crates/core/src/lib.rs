//! Mining of high-utility sequential patterns (HUSPs), frequent HUSPs and
//! closed frequent HUSPs from quantitative sequence databases.
//!
//! ```
//! use chusp::fixture::toy_database;
//! use chusp::miner::{mine, MinSup, MiningParams, Mode};
//! use chusp::utility::Utility;
//!
//! let params = MiningParams::new(Mode::Chusp, Utility::from_units(130))
//!     .with_min_sup(MinSup::ratio(0.5).unwrap());
//! let out = mine(&toy_database(), &params).unwrap();
//! assert_eq!(out.patterns.len(), 8);
//! ```

pub mod bench;
pub mod error;
pub mod fixture;
pub mod io;
pub mod miner;
pub mod oracle;
pub mod projection;
pub mod qseq;
pub mod utility;

pub use error::{Error, Result};
pub use miner::{mine, mine_with, MinSup, MinedPattern, MiningOutcome, MiningParams, Mode};
pub use qseq::{ItemId, Pattern, QSequenceDatabase};
pub use utility::Utility;
