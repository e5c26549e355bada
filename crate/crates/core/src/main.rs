use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chusp::bench::alloc::TrackingAllocator;
use chusp::bench::{run_cell, run_sweep, DatasetPaths, SweepConfig, SweepReport};
use chusp::io::{generate_database, load_database, write_patterns, write_profits, write_sequences, GeneratorConfig};
use chusp::oracle::{oracle_mine, OracleLimits};
use chusp::{Error, MinSup, MiningParams, Mode, QSequenceDatabase, Utility};

#[global_allocator]
static ALLOC: TrackingAllocator = TrackingAllocator;

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_LIMIT: u8 = 4;

#[derive(Parser)]
#[command(name = "chusp", version, about = "High-utility sequential pattern mining")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine one database at one threshold.
    Mine(MineArgs),
    /// Run every mode x threshold cell and write per-cell results and a stats CSV.
    Sweep(SweepArgs),
    /// Write a seeded synthetic database and profit table.
    Generate(GenerateArgs),
    /// Mine by brute force (small inputs only).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Thresholds {
    #[arg(long, default_value = "chusp")]
    mode: Mode,
    #[arg(long)]
    min_util: Utility,
    /// Ratio of sequences ("0.5") or absolute count ("3a").
    #[arg(long, default_value = "1a")]
    min_sup: MinSup,
    #[arg(long)]
    max_length: Option<usize>,
}

impl Thresholds {
    fn params(&self) -> MiningParams {
        MiningParams::new(self.mode, self.min_util)
            .with_min_sup(self.min_sup)
            .with_max_length(self.max_length)
    }
}

#[derive(Args)]
struct MineArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    profits: PathBuf,
    #[command(flatten)]
    thresholds: Thresholds,
    /// Pattern file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// One-row stats CSV.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sequence file; repeat for several datasets.
    #[arg(long, required = true)]
    data: Vec<PathBuf>,
    /// Profit file, paired with each --data in order.
    #[arg(long, required = true)]
    profits: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "husp,fhusp,chusp")]
    modes: Vec<Mode>,
    #[arg(long, value_delimiter = ',', required = true)]
    min_utils: Vec<Utility>,
    #[arg(long, default_value = "1a")]
    min_sup: MinSup,
    #[arg(long)]
    max_length: Option<usize>,
    /// Per-mode length cap, e.g. `husp=3`; repeatable.
    #[arg(long, value_parser = parse_mode_length)]
    mode_max_length: Vec<(Mode, usize)>,
    #[arg(long)]
    out_dir: PathBuf,
    /// Run cells concurrently; timings are flagged as not comparable.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    sequences: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    items: u32,
    #[arg(long, default_value_t = 8.0)]
    avg_itemsets: f64,
    #[arg(long, default_value_t = 2.0)]
    avg_itemset_size: f64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    max_qty: u32,
    #[arg(long, default_value = "1")]
    min_profit: Utility,
    #[arg(long, default_value = "10")]
    max_profit: Utility,
    /// Sequence file to write.
    #[arg(long)]
    out_data: PathBuf,
    /// Profit file to write.
    #[arg(long)]
    out_profits: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    profits: PathBuf,
    #[command(flatten)]
    thresholds: Thresholds,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = OracleLimits::default().max_sequences)]
    max_sequences: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_distinct_items)]
    max_items: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_pattern_length)]
    max_pattern_length: usize,
}

fn parse_mode_length(s: &str) -> Result<(Mode, usize), String> {
    let (m, n) = s.split_once('=').ok_or("expected MODE=LENGTH")?;
    let mode = m.parse::<Mode>().map_err(|e| e.to_string())?;
    let len = n.parse::<usize>().map_err(|e| e.to_string())?;
    Ok((mode, len))
}

/// An error with the exit code it maps to.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OracleLimit(_) => EXIT_LIMIT,
            Error::Io(_) | Error::Csv(_) => EXIT_OTHER,
            _ => EXIT_PARSE,
        };
        Failure(code, e.to_string())
    }
}

fn load(data: &Path, profits: &Path) -> Result<QSequenceDatabase, Failure> {
    load_database(data, profits).map_err(|e| Failure(EXIT_PARSE, e.to_string()))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure(EXIT_OTHER, format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure(EXIT_OTHER, format!("cannot create {}: {e}", path.display())))
}

fn cmd_mine(args: MineArgs) -> Result<(), Failure> {
    let db = load(&args.data, &args.profits)?;
    let (outcome, stats) = run_cell(&db, &args.thresholds.params())?;
    let mut out = sink(args.output.as_deref())?;
    write_patterns(&outcome.patterns, &mut out)?;
    out.flush().map_err(Error::from)?;
    if let Some(p) = &args.stats {
        let report = SweepReport {
            rows: vec![stats],
            outcomes: vec![],
            timing_comparable: true,
        };
        report.write_csv(create(p)?)?;
    }
    log::info!("{} patterns", outcome.patterns.len());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    if args.data.len() != args.profits.len() {
        return Err(Failure(2, "each --data needs a matching --profits".into()));
    }
    let config = SweepConfig {
        datasets: args
            .data
            .into_iter()
            .zip(args.profits)
            .map(|(sequences, profits)| DatasetPaths { sequences, profits })
            .collect(),
        modes: args.modes,
        min_utils: args.min_utils,
        min_sup: args.min_sup,
        max_length: args.max_length,
        mode_max_length: args.mode_max_length.into_iter().collect::<BTreeMap<_, _>>(),
        out_dir: args.out_dir,
        parallel: args.parallel,
    };
    for paths in &config.datasets {
        // surface missing inputs as input errors before any cell runs
        load(&paths.sequences, &paths.profits)?;
    }
    for (paths, report) in run_sweep(&config)? {
        let issues: Vec<String> = report
            .monotonicity_violations()
            .into_iter()
            .chain(report.containment_violations())
            .collect();
        eprintln!(
            "{}: {} cells, {}",
            paths.sequences.display(),
            report.rows.len(),
            if issues.is_empty() { "counts consistent".to_owned() } else { issues.join("; ") }
        );
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let config = GeneratorConfig {
        seed: args.seed,
        num_sequences: usize::try_from(args.sequences).map_err(|_| Failure(2, "too many sequences".into()))?,
        num_items: args.items,
        avg_itemsets_per_sequence: args.avg_itemsets,
        avg_items_per_itemset: args.avg_itemset_size,
        max_qty: args.max_qty,
        profit_range: (args.min_profit, args.max_profit),
    };
    config.validate().map_err(|e| Failure(2, e.to_string()))?;
    let db = generate_database(&config)?;
    let mut s = create(&args.out_data)?;
    write_sequences(&db, &mut s)?;
    s.flush().map_err(Error::from)?;
    let mut p = create(&args.out_profits)?;
    write_profits(db.profits(), &mut p)?;
    p.flush().map_err(Error::from)?;
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), Failure> {
    let db = load(&args.data, &args.profits)?;
    let limits = OracleLimits {
        max_sequences: args.max_sequences,
        max_distinct_items: args.max_items,
        max_pattern_length: args.max_pattern_length,
    };
    let patterns = oracle_mine(&db, &args.thresholds.params(), &limits)?;
    let mut out = sink(args.output.as_deref())?;
    write_patterns(&patterns, &mut out)?;
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(a) => cmd_mine(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
