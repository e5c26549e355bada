//! Threshold sweeps over the three mining modes, with runtime, memory and
//! search counters per cell.

pub mod alloc;

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{load_database, write_patterns};
use crate::miner::{mine, Counters, MinSup, MiningOutcome, MiningParams, Mode};
use crate::qseq::QSequenceDatabase;
use crate::utility::Utility;

pub const STATS_HEADER: [&str; 12] = [
    "mode",
    "min_util",
    "min_sup",
    "max_length",
    "patterns",
    "runtime_ms",
    "peak_mem_bytes",
    "candidates_generated",
    "nodes_pruned_swu",
    "nodes_pruned_peu",
    "nodes_pruned_rsu",
    "nodes_pruned_msp",
];

/// Extra column present only in CSVs from parallel sweeps.
pub const TIMING_COMPARABLE: &str = "timing_comparable";

#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub mode: Mode,
    pub min_util: Utility,
    pub min_sup: MinSup,
    pub max_length: Option<usize>,
    pub pattern_count: usize,
    /// Mining wall clock, parsing excluded.
    pub runtime_ms: f64,
    /// Heap high-water during mining; 0 when unavailable.
    pub peak_mem_bytes: usize,
    pub counters: Counters,
}

impl RunStats {
    pub fn record(&self) -> Vec<String> {
        let c = &self.counters;
        vec![
            self.mode.to_string(),
            self.min_util.to_string(),
            self.min_sup.to_string(),
            self.max_length.map_or_else(|| "full".to_owned(), |l| l.to_string()),
            self.pattern_count.to_string(),
            format!("{:.3}", self.runtime_ms),
            self.peak_mem_bytes.to_string(),
            c.candidates_generated.to_string(),
            c.nodes_pruned_swu.to_string(),
            c.nodes_pruned_peu.to_string(),
            c.nodes_pruned_rsu.to_string(),
            c.nodes_pruned_msp.to_string(),
        ]
    }
}

static MEM_WARNED: AtomicBool = AtomicBool::new(false);

/// Mines once and measures it.
pub fn run_cell(db: &QSequenceDatabase, params: &MiningParams) -> Result<(MiningOutcome, RunStats)> {
    alloc::reset_peak();
    let start = Instant::now();
    let outcome = mine(db, params)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let peak_mem_bytes = alloc::peak_bytes().unwrap_or_else(|| {
        if !MEM_WARNED.swap(true, Ordering::Relaxed) {
            log::warn!("heap tracking not installed; peak_mem_bytes recorded as 0");
        }
        0
    });
    let stats = RunStats {
        mode: params.mode,
        min_util: params.min_util,
        min_sup: params.min_sup,
        max_length: params.max_length,
        pattern_count: outcome.patterns.len(),
        runtime_ms,
        peak_mem_bytes,
        counters: outcome.counters,
    };
    Ok((outcome, stats))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPaths {
    pub sequences: PathBuf,
    pub profits: PathBuf,
}

impl DatasetPaths {
    fn stem(&self) -> String {
        self.sequences
            .file_stem()
            .map_or_else(|| "dataset".to_owned(), |s| s.to_string_lossy().into_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub datasets: Vec<DatasetPaths>,
    pub modes: Vec<Mode>,
    /// Swept in descending order.
    pub min_utils: Vec<Utility>,
    pub min_sup: MinSup,
    pub max_length: Option<usize>,
    /// Per-mode override of `max_length`.
    pub mode_max_length: BTreeMap<Mode, usize>,
    pub out_dir: PathBuf,
    /// Runs cells concurrently; timings are then flagged as not comparable
    /// and memory is not measured.
    pub parallel: bool,
}

impl SweepConfig {
    pub fn validate(&mut self) -> Result<()> {
        if self.datasets.is_empty() || self.modes.is_empty() || self.min_utils.is_empty() {
            return Err(Error::InvalidParams("sweep needs at least one dataset, mode and threshold".into()));
        }
        self.min_utils.sort_unstable_by(|a, b| b.cmp(a));
        self.min_utils.dedup();
        self.modes.sort_unstable();
        self.modes.dedup();
        Ok(())
    }

    pub fn params(&self, mode: Mode, min_util: Utility) -> MiningParams {
        MiningParams {
            min_util,
            min_sup: self.min_sup,
            max_length: self.mode_max_length.get(&mode).copied().or(self.max_length),
            mode,
        }
    }

    fn cells(&self) -> Vec<(Mode, Utility)> {
        self.modes
            .iter()
            .flat_map(|&m| self.min_utils.iter().map(move |&u| (m, u)))
            .collect()
    }
}

/// Result of one sweep over one database.
#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub rows: Vec<RunStats>,
    pub outcomes: Vec<MiningOutcome>,
    pub timing_comparable: bool,
}

impl SweepReport {
    fn count(&self, mode: Mode, min_util: Utility) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.mode == mode && r.min_util == min_util)
            .map(|r| r.pattern_count)
    }

    /// Cells where a mode's pattern count grows as the threshold rises.
    pub fn monotonicity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut by_mode: BTreeMap<Mode, Vec<&RunStats>> = BTreeMap::new();
        for r in &self.rows {
            by_mode.entry(r.mode).or_default().push(r);
        }
        for (mode, mut rows) in by_mode {
            rows.sort_by_key(|r| std::cmp::Reverse(r.min_util));
            for w in rows.windows(2) {
                if w[1].pattern_count < w[0].pattern_count {
                    out.push(format!(
                        "{mode}: {} patterns at min_util {} but {} at {}",
                        w[1].pattern_count, w[1].min_util, w[0].pattern_count, w[0].min_util
                    ));
                }
            }
        }
        out
    }

    /// Thresholds where `chusp <= fhusp <= husp` fails.
    pub fn containment_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut thresholds: Vec<Utility> = self.rows.iter().map(|r| r.min_util).collect();
        thresholds.sort_unstable();
        thresholds.dedup();
        for u in thresholds {
            let c = self.count(Mode::Chusp, u);
            let f = self.count(Mode::Fhusp, u);
            let h = self.count(Mode::Husp, u);
            if let (Some(c), Some(f)) = (c, f) {
                if c > f {
                    out.push(format!("min_util {u}: chusp {c} > fhusp {f}"));
                }
            }
            if let (Some(f), Some(h)) = (f, h) {
                if f > h {
                    out.push(format!("min_util {u}: fhusp {f} > husp {h}"));
                }
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        let mut header: Vec<&str> = STATS_HEADER.to_vec();
        if !self.timing_comparable {
            header.push(TIMING_COMPARABLE);
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = r.record();
            if !self.timing_comparable {
                rec.push("false".to_owned());
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs every (mode, threshold) cell of `config` against an in-memory
/// database. Any failing cell aborts the sweep.
pub fn sweep_database(db: &QSequenceDatabase, config: &SweepConfig) -> Result<SweepReport> {
    let cells = config.cells();
    let results: Vec<(MiningOutcome, RunStats)> = if config.parallel {
        cells
            .par_iter()
            .map(|&(mode, u)| {
                let (o, mut s) = run_cell(db, &config.params(mode, u)).map_err(|e| cell_error(mode, u, e))?;
                s.peak_mem_bytes = 0;
                Ok((o, s))
            })
            .collect::<Result<_>>()?
    } else {
        cells
            .iter()
            .map(|&(mode, u)| run_cell(db, &config.params(mode, u)).map_err(|e| cell_error(mode, u, e)))
            .collect::<Result<_>>()?
    };
    let (outcomes, rows) = results.into_iter().unzip();
    Ok(SweepReport {
        rows,
        outcomes,
        timing_comparable: !config.parallel,
    })
}

fn cell_error(mode: Mode, min_util: Utility, e: Error) -> Error {
    Error::InvalidParams(format!("sweep cell {mode}/{min_util} failed: {e}"))
}

/// Loads each dataset, sweeps it, and writes `{mode}_{min_util}.txt` pattern
/// files plus `stats.csv`. With several datasets each gets a subdirectory
/// named after its sequence file.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<(DatasetPaths, SweepReport)>> {
    let mut config = config.clone();
    config.validate()?;
    let mut reports = Vec::new();
    for paths in &config.datasets {
        let db = load_database(&paths.sequences, &paths.profits)?;
        let report = sweep_database(&db, &config)?;
        let dir = if config.datasets.len() > 1 {
            config.out_dir.join(paths.stem())
        } else {
            config.out_dir.clone()
        };
        write_report(&dir, &report)?;
        for v in report.monotonicity_violations().iter().chain(&report.containment_violations()) {
            log::warn!("{}: {v}", paths.stem());
        }
        reports.push((paths.clone(), report));
    }
    Ok(reports)
}

fn write_report(dir: &Path, report: &SweepReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (row, outcome) in report.rows.iter().zip(&report.outcomes) {
        let name = format!("{}_{}.txt", row.mode, row.min_util);
        let mut f = BufWriter::new(File::create(dir.join(name))?);
        write_patterns(&outcome.patterns, &mut f)?;
        f.flush()?;
    }
    report.write_csv(BufWriter::new(File::create(dir.join("stats.csv"))?))
}
