//! Command-line front end: corpus ingestion, index build, queries, latency
//! benchmarks and a self-test against the brute-force oracle.

pub mod bench;
pub mod check;
pub mod commands;
pub mod corpus;
pub mod pattern;
pub mod selftest;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use seqdocs::{Error, IngestMode};

use bench::{BenchAlgo, BenchPattern};
use commands::{BuildOptions, Outcome, QueryOp, QueryOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_SELFTEST: i32 = 4;

const PATTERN_HELP: &str = "Pattern. Tokens mode: whitespace-separated tokens; a token absent \
from the vocabulary matches nothing. Bytes mode: either `hex:` followed by an even number of hex \
digits, or literal text where `\\xNN` is the byte 0xNN, `\\n` is 0x0a, `\\t` is 0x09 and `\\\\` is \
one backslash; any other backslash sequence is rejected.";

#[derive(Parser, Debug)]
#[command(
    name = "seqdocs",
    version,
    about = "Succinct document retrieval over sequence collections"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Bytes,
    Tokens,
}

impl From<ModeArg> for IngestMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Bytes => IngestMode::Bytes,
            ModeArg::Tokens => IngestMode::Tokens,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OpArg {
    List,
    Listfreq,
    Df,
    Topk,
    Topkw,
    Locate,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ingest a corpus and write an index file.
    Build {
        /// A directory (one document per file, ordered by name) or a single
        /// file split on --sep.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "bytes")]
        mode: ModeArg,
        /// Document separator: `auto`, a byte value (decimal or 0x hex),
        /// `\n`, `\t` or a single character.
        #[arg(long, default_value = "auto")]
        sep: String,
        #[arg(long, default_value = "index.sdr")]
        output: PathBuf,
        /// Block factor for blocked listing.
        #[arg(long)]
        b: Option<usize>,
        /// File with one weight per document, whitespace separated.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run a query against an index.
    Query {
        #[arg(value_enum)]
        op: OpArg,
        #[arg(long, default_value = "index.sdr")]
        index: PathBuf,
        #[arg(long, help = PATTERN_HELP)]
        pattern: String,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// list: rmq | mark | blocked. listfreq: rank | dfs | quantile |
        /// local | expsearch.
        #[arg(long)]
        algo: Option<String>,
        /// Weights for topkw, overriding those stored in the index.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Emit JSON lines.
        #[arg(long)]
        json: bool,
    },
    /// Time queries for every pattern in a file and write CSV.
    Bench {
        #[arg(long, default_value = "index.sdr")]
        index: PathBuf,
        /// One pattern per line, same syntax as `query --pattern`.
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long, default_value_t = 5)]
        repeat: usize,
        /// Output CSV; a per-structure `<name>_space.csv` is written beside it.
        /// Defaults to standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Comma-separated: rmq, mark, blocked, rank, dfs, quantile, local,
        /// expsearch, df, topk, topkw.
        #[arg(long, default_value = "rmq,mark,blocked")]
        algo: String,
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
    /// Compare every backend with the brute-force oracle on a random corpus.
    Selftest {
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        sigma: u32,
        #[arg(long, default_value_t = 50)]
        docs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of random patterns.
        #[arg(long, default_value_t = 500)]
        patterns: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidPattern(_)
        | Error::UnknownAlgo(_)
        | Error::Config(_)
        | Error::Range { .. }
        | Error::WeightDimensionMismatch { .. } => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn read_patterns(
    path: &std::path::Path,
    idx: &seqdocs::TextIndex,
) -> seqdocs::Result<Vec<BenchPattern>> {
    let mut out = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let symbols = pattern::encode(idx, &line)?;
        let len = symbols
            .as_ref()
            .map_or_else(|| line.split_whitespace().count(), Vec::len);
        out.push(BenchPattern {
            label: line,
            len,
            symbols,
        });
    }
    if out.is_empty() {
        return Err(Error::Config("patterns file is empty".into()));
    }
    Ok(out)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> seqdocs::Result<i32> {
    match cmd {
        Command::Build {
            input,
            mode,
            sep,
            output,
            b,
            weights,
            json,
        } => {
            commands::build(
                &BuildOptions {
                    input: &input,
                    mode: mode.into(),
                    separator: commands::parse_separator(&sep)?,
                    output: &output,
                    block_factor: b,
                    weights: weights.as_deref(),
                    json,
                },
                out,
            )?;
            Ok(EXIT_OK)
        }
        Command::Query {
            op,
            index,
            pattern,
            k,
            algo,
            weights,
            json,
        } => {
            let op = match op {
                OpArg::List => QueryOp::List,
                OpArg::Listfreq => QueryOp::ListFreq,
                OpArg::Df => QueryOp::Df,
                OpArg::Topk => QueryOp::TopK,
                OpArg::Topkw => QueryOp::TopKWeighted,
                OpArg::Locate => QueryOp::Locate,
            };
            let outcome = commands::query(
                &QueryOptions {
                    index: &index,
                    op,
                    pattern: &pattern,
                    k,
                    algo: algo.as_deref(),
                    weights: weights.as_deref(),
                    json,
                },
                out,
            )?;
            Ok(match outcome {
                Outcome::Found => EXIT_OK,
                Outcome::Empty => EXIT_EMPTY,
            })
        }
        Command::Bench {
            index,
            patterns,
            repeat,
            csv,
            algo,
            k,
        } => {
            let algos = algo
                .split(',')
                .map(|a| BenchAlgo::parse(a.trim()))
                .collect::<seqdocs::Result<Vec<_>>>()?;
            if repeat == 0 {
                return Err(Error::Config("--repeat must be at least 1".into()));
            }
            let engine = seqdocs::format::load_path(&index)?;
            let pats = read_patterns(&patterns, engine.index())?;
            let rows = bench::run_bench(&engine, &pats, &algos, repeat, k, bench::worker_count())?;
            match csv {
                Some(path) => {
                    bench::write_csv(&rows, BufWriter::new(File::create(&path)?))?;
                    let space = bench::space_table(&engine)?;
                    let space_path = bench::space_csv_path(&path);
                    bench::write_space_csv(&space, BufWriter::new(File::create(&space_path)?))?;
                    writeln!(
                        out,
                        "wrote {} rows to {} and space table to {}",
                        rows.len(),
                        path.display(),
                        space_path.display()
                    )?;
                }
                None => bench::write_csv(&rows, &mut *out)?,
            }
            Ok(EXIT_OK)
        }
        Command::Selftest {
            n,
            sigma,
            docs,
            seed,
            patterns,
            inject_fault,
        } => {
            if n == 0 || sigma == 0 || docs == 0 || patterns == 0 {
                return Err(Error::Config("selftest parameters must be positive".into()));
            }
            let cfg = selftest::SelftestConfig {
                n,
                sigma,
                docs,
                seed,
                patterns,
                inject_fault,
            };
            Ok(if selftest::run(&cfg, out)? {
                EXIT_OK
            } else {
                EXIT_SELFTEST
            })
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
