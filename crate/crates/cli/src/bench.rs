//! Query latency benchmark.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::thread;
use std::time::Instant;

use seqdocs::format;
use seqdocs::retrieval::ListAlgo;
use seqdocs::{Error, FreqBackend, QueryEngine, Result};

/// Benchmarked operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchAlgo {
    List(ListAlgo),
    Freq(FreqBackend),
    Df,
    TopK,
    TopKWeighted,
}

impl BenchAlgo {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "df" => BenchAlgo::Df,
            "topk" => BenchAlgo::TopK,
            "topkw" => BenchAlgo::TopKWeighted,
            _ => match s.parse::<ListAlgo>() {
                Ok(a) => BenchAlgo::List(a),
                Err(_) => BenchAlgo::Freq(s.parse()?),
            },
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchAlgo::List(ListAlgo::Rmq) => "rmq",
            BenchAlgo::List(ListAlgo::Marking) => "mark",
            BenchAlgo::List(ListAlgo::Blocked) => "blocked",
            BenchAlgo::Freq(FreqBackend::Rank) => "rank",
            BenchAlgo::Freq(FreqBackend::Dfs) => "dfs",
            BenchAlgo::Freq(FreqBackend::Quantile) => "quantile",
            BenchAlgo::Freq(FreqBackend::LocalSa) => "local",
            BenchAlgo::Freq(FreqBackend::ExpSearch) => "expsearch",
            BenchAlgo::Df => "df",
            BenchAlgo::TopK => "topk",
            BenchAlgo::TopKWeighted => "topkw",
        }
    }

    /// Structures read at query time, pattern search included.
    pub fn structures(self) -> &'static [&'static str] {
        match self {
            BenchAlgo::List(ListAlgo::Rmq | ListAlgo::Marking) => &["text", "A", "C", "L", "rmq_L"],
            BenchAlgo::List(ListAlgo::Blocked) => &["text", "A", "C", "L_sampled", "rmq_L_sampled"],
            BenchAlgo::Freq(FreqBackend::Rank) => &["text", "A", "C", "L", "rmq_L", "wt_C"],
            BenchAlgo::Freq(FreqBackend::Dfs | FreqBackend::Quantile) => &["text", "A", "wt_C"],
            BenchAlgo::Freq(FreqBackend::LocalSa) => &[
                "text",
                "A",
                "A_inv",
                "B",
                "C",
                "L",
                "NXT",
                "rmq_L",
                "rmq_NXT",
                "local_sa",
                "local_isa",
            ],
            BenchAlgo::Freq(FreqBackend::ExpSearch) => &[
                "text",
                "A",
                "A_inv",
                "B",
                "C",
                "L",
                "rmq_L",
                "local_sa",
                "local_isa",
            ],
            BenchAlgo::Df => &["text", "A", "wt_L"],
            BenchAlgo::TopK => &["text", "A", "wt_C"],
            BenchAlgo::TopKWeighted => &["text", "A", "weights", "wt_W"],
        }
    }
}

/// One benchmark pattern: its display form and symbols (`None` when it
/// cannot occur).
#[derive(Debug, Clone)]
pub struct BenchPattern {
    pub label: String,
    pub len: usize,
    pub symbols: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algo: &'static str,
    pub pattern: String,
    pub pattern_len: usize,
    pub docc: usize,
    pub k: Option<usize>,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub p95_ms: f64,
    pub reset_ms: f64,
    pub space_bpc: f64,
    pub structures: String,
}

/// Bits per symbol of each structure: serialized sections plus the
/// weight-relabeled tree, which only exists in memory.
pub fn space_table(engine: &QueryEngine) -> Result<Vec<(String, u64, f64)>> {
    let n = engine.index().len();
    let mut out: Vec<(String, u64, f64)> = format::save(engine, &mut std::io::sink())?
        .into_iter()
        .map(|s| (s.name.to_string(), s.bytes, s.bpc(n)))
        .collect();
    if let Some((_, bits)) = engine
        .space_report()
        .into_iter()
        .find(|(name, _)| *name == "weights")
    {
        let bytes = bits.div_ceil(8) as u64;
        out.push(("wt_W".into(), bytes, bytes as f64 * 8.0 / n as f64));
    }
    Ok(out)
}

/// Number of worker threads: available parallelism capped by
/// `SEQDOCS_THREADS`.
pub fn worker_count() -> usize {
    let avail = thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("SEQDOCS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(cap) => avail.min(cap.max(1)),
        None => avail,
    }
}

struct Timing {
    docc: usize,
    samples_ms: Vec<f64>,
    reset_ms: f64,
}

fn run_once(
    engine: &QueryEngine,
    algo: BenchAlgo,
    p: &[u32],
    k: usize,
    weights: &[f64],
) -> Result<(usize, f64)> {
    let Some((sp, ep)) = engine.pattern_range(p)? else {
        return Ok((0, 0.0));
    };
    Ok(match algo {
        BenchAlgo::List(a) => {
            let (hits, stats) = engine.list(sp, ep, a)?;
            (hits.len(), stats.reset_ns as f64 / 1e6)
        }
        BenchAlgo::Freq(b) => (engine.list_with_freq(sp, ep, b)?.len(), 0.0),
        BenchAlgo::Df => (engine.doc_frequency(sp, ep)?, 0.0),
        BenchAlgo::TopK => (engine.topk_frequent_range(sp, ep, k)?.len(), 0.0),
        BenchAlgo::TopKWeighted => (engine.topk_important_range(sp, ep, k, weights)?.len(), 0.0),
    })
}

fn time_pattern(
    engine: &QueryEngine,
    algo: BenchAlgo,
    p: &BenchPattern,
    repeat: usize,
    k: usize,
    weights: &[f64],
) -> Result<Timing> {
    let mut samples_ms = Vec::with_capacity(repeat);
    let mut docc = 0;
    let mut reset_ms = 0.0;
    for _ in 0..repeat {
        let start = Instant::now();
        let (d, reset) = match &p.symbols {
            Some(s) => run_once(engine, algo, s, k, weights)?,
            None => (0, 0.0),
        };
        samples_ms.push(start.elapsed().as_secs_f64() * 1e3);
        docc = d;
        reset_ms += reset;
    }
    Ok(Timing {
        docc,
        samples_ms,
        reset_ms: reset_ms / repeat as f64,
    })
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let idx = ((sorted.len() as f64 * q).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx]
}

/// Times every `(algo, pattern)` pair `repeat` times. Rows are ordered by
/// algorithm, then pattern.
pub fn run_bench(
    engine: &QueryEngine,
    patterns: &[BenchPattern],
    algos: &[BenchAlgo],
    repeat: usize,
    k: usize,
    threads: usize,
) -> Result<Vec<BenchRow>> {
    if repeat == 0 {
        return Err(Error::Config("--repeat must be at least 1".into()));
    }
    if patterns.is_empty() {
        return Err(Error::Config("no benchmark patterns".into()));
    }
    let weights: Vec<f64> = match engine.weights() {
        Some(w) => w.to_vec(),
        None if algos.contains(&BenchAlgo::TopKWeighted) => {
            return Err(Error::Config(
                "topkw needs an index built with --weights".into(),
            ))
        }
        None => Vec::new(),
    };
    let space: HashMap<String, f64> = space_table(engine)?
        .into_iter()
        .map(|(name, _, bpc)| (name, bpc))
        .collect();

    let jobs: Vec<(BenchAlgo, usize)> = algos
        .iter()
        .flat_map(|&a| (0..patterns.len()).map(move |i| (a, i)))
        .collect();
    let threads = threads.clamp(1, jobs.len());
    let results: Vec<Vec<(usize, Timing)>> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let jobs = &jobs;
                let weights = &weights;
                s.spawn(move || -> Result<Vec<(usize, Timing)>> {
                    let mut out = Vec::new();
                    for j in (t..jobs.len()).step_by(threads) {
                        let (a, i) = jobs[j];
                        out.push((
                            j,
                            time_pattern(engine, a, &patterns[i], repeat, k, weights)?,
                        ));
                    }
                    Ok(out)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut timings: Vec<Option<Timing>> = (0..jobs.len()).map(|_| None).collect();
    for (j, t) in results.into_iter().flatten() {
        timings[j] = Some(t);
    }

    Ok(jobs
        .iter()
        .zip(timings)
        .map(|(&(algo, i), t)| {
            let t = t.expect("every job timed");
            let mut sorted = t.samples_ms.clone();
            sorted.sort_by(f64::total_cmp);
            let structures = algo.structures();
            let uses_k = matches!(algo, BenchAlgo::TopK | BenchAlgo::TopKWeighted);
            BenchRow {
                algo: algo.name(),
                pattern: patterns[i].label.clone(),
                pattern_len: patterns[i].len,
                docc: t.docc,
                k: uses_k.then_some(k),
                mean_ms: sorted.iter().sum::<f64>() / sorted.len() as f64,
                median_ms: percentile(&sorted, 0.5),
                p95_ms: percentile(&sorted, 0.95),
                reset_ms: t.reset_ms,
                space_bpc: structures
                    .iter()
                    .map(|s| space.get(*s).copied().unwrap_or(0.0))
                    .sum(),
                structures: structures.join("+"),
            }
        })
        .collect())
}

pub const CSV_HEADER: [&str; 11] = [
    "algo",
    "pattern",
    "pattern_len",
    "docc",
    "k",
    "mean_ms",
    "median_ms",
    "p95_ms",
    "reset_ms",
    "space_bpc",
    "structures",
];

pub fn write_csv<W: Write>(rows: &[BenchRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        out.write_record([
            r.algo.to_string(),
            r.pattern.clone(),
            r.pattern_len.to_string(),
            r.docc.to_string(),
            r.k.map(|k| k.to_string()).unwrap_or_default(),
            format!("{:.6}", r.mean_ms),
            format!("{:.6}", r.median_ms),
            format!("{:.6}", r.p95_ms),
            format!("{:.6}", r.reset_ms),
            format!("{:.4}", r.space_bpc),
            r.structures.clone(),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_space_csv<W: Write>(table: &[(String, u64, f64)], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["structure", "bytes", "bpc"])
        .map_err(csv_err)?;
    for (name, bytes, bpc) in table {
        out.write_record([name.clone(), bytes.to_string(), format!("{bpc:.4}")])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Path of the per-structure space table written next to `csv`.
pub fn space_csv_path(csv: &Path) -> std::path::PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    csv.with_file_name(format!("{stem}_space.csv"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
