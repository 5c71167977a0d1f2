//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::OnceLock;
use std::thread;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqdocs::format;
use seqdocs::oracle::NaiveCorpus;
use seqdocs::retrieval::{BlockOrder, ColorIndex, EngineConfig, ListAlgo, RecursionOrder};
use seqdocs::{
    BitVector, DocumentCollection, InitializableArray, QueryEngine, RmqIndex, RmqMode, TextIndex,
    WaveletTree,
};
use seqdocs_cli::bench::{self, BenchAlgo, BenchPattern};
use seqdocs_cli::check::{differential, DiffReport};
use seqdocs_cli::corpus;
use seqdocs_cli::selftest::golden_checks;

const GOLDEN_TIME_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(600);
const ORACLE_CORPORA: usize = 20;
const ORACLE_PATTERNS: usize = 1000;
const ORACLE_MAX_N: usize = 50_000;
const SIGMAS: [u32; 4] = [2, 4, 26, 255];
const BITMAPS: usize = 100_000;
const SERIALIZATION_CORPORA: usize = 100;
const SMALL_CORPUS_BYTES: usize = 6 << 20;
const LARGE_CORPUS_BYTES: usize = 50 << 20;
const PERF_DOC_BYTES: usize = 10_000;
const PERF_MARKERS: usize = 20;
const PERF_DOCC: usize = 10;
const PERF_REPEAT: usize = 30;
const TOPK_PER_RESULT_FACTOR: f64 = 50.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let checks = golden_checks(RecursionOrder::LeftFirst).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut failed = Vec::new();
    for g in checks.iter().filter(|g| g.name.starts_with('(')) {
        println!(
            "    {} {}: {}",
            if g.passed { "ok  " } else { "FAIL" },
            g.name,
            g.detail
        );
        if !g.passed {
            failed.push(g.name);
        }
    }
    ensure(
        checks.iter().filter(|g| g.name.starts_with('(')).count() == 8,
        || "expected 8 golden checks".into(),
    )?;
    ensure(failed.is_empty(), || format!("failed: {failed:?}"))?;
    ensure(elapsed < GOLDEN_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("8/8 golden checks exact in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let c = ColorIndex::new(vec![2, 3, 3, 3, 2, 2, 2, 2, 2, 1, 1, 1], 3, 2)
        .map_err(|e| e.to_string())?;
    let sorted = |order| {
        let mut d = c.list_blocked(3, 12, order).unwrap().0.docs();
        d.sort_unstable();
        d
    };
    let good = sorted(BlockOrder::LeftBlockRight);
    let bad = sorted(BlockOrder::BlockLeftRight);
    let elapsed = start.elapsed();
    ensure(c.block_minima() == [0, 2, 1, 6, 0, 10], || {
        format!("L' = {:?}", c.block_minima())
    })?;
    ensure(good == [1, 2, 3], || format!("correct order gave {good:?}"))?;
    ensure(!bad.contains(&3), || {
        format!("wrong order gave {bad:?}, expected 3 missing")
    })?;
    ensure(c.marks_clean(), || "marks not reset".into())?;
    ensure(elapsed < GOLDEN_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "L' = [0,2,1,6,0,10]; left-block-right {good:?}; block-first {bad:?}; {elapsed:?}"
    ))
}

struct OracleRuns {
    report: DiffReport,
    sim_pred_checked: usize,
    sim_pred_mismatches: usize,
    elapsed: Duration,
    sizes: Vec<(usize, u32, usize, usize)>,
}

fn oracle_corpus(i: usize) -> (DocumentCollection, Vec<Vec<u32>>, Vec<f64>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
    let sigma = SIGMAS[i % SIGMAS.len()];
    let docs = rng.gen_range(2..=500);
    let n = rng.gen_range(5_000..=ORACLE_MAX_N - 500);
    let coll = corpus::random_collection(&mut rng, n, sigma, docs).unwrap();
    let patterns = corpus::random_patterns(&mut rng, &coll, ORACLE_PATTERNS, 0.7, 20);
    let weights = corpus::random_weights(&mut rng, coll.num_docs());
    let b = [2, 3, 8, 0][i % 4];
    (coll, patterns, weights, b)
}

fn run_oracle_corpus(i: usize) -> (DiffReport, usize, usize, (usize, u32, usize, usize)) {
    let (coll, patterns, weights, b) = oracle_corpus(i);
    let engine = QueryEngine::with_config(
        TextIndex::build(&coll).unwrap(),
        EngineConfig {
            block_factor: (b > 0).then_some(b),
            weights: Some(weights.clone()),
            ..Default::default()
        },
    )
    .unwrap();
    let n = engine.index().len();
    assert!(n <= ORACLE_MAX_N);
    let naive = NaiveCorpus::new(&coll);
    let report = differential(
        &engine,
        &naive,
        &patterns,
        &weights,
        RecursionOrder::LeftFirst,
    );
    let pred = engine.index().predecessors();
    let wt = engine.doc_wavelet();
    let mismatches = (1..=n)
        .filter(|&i| wt.sim_pred(i).unwrap() != pred[i - 1] as usize)
        .count();
    (
        report,
        n,
        mismatches,
        (n, coll.sigma(), coll.num_docs(), engine.block_factor()),
    )
}

fn oracle_runs() -> &'static OracleRuns {
    static RUNS: OnceLock<OracleRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let workers = thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(ORACLE_CORPORA);
        let results: Vec<_> = thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    s.spawn(move || {
                        (w..ORACLE_CORPORA)
                            .step_by(workers)
                            .map(|i| (i, run_oracle_corpus(i)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().unwrap())
                .collect()
        });
        let mut runs = OracleRuns {
            report: DiffReport::default(),
            sim_pred_checked: 0,
            sim_pred_mismatches: 0,
            elapsed: Duration::ZERO,
            sizes: Vec::new(),
        };
        let mut results = results;
        results.sort_by_key(|r| r.0);
        for (_, (report, n, mismatches, size)) in results {
            runs.report.merge(report);
            runs.sim_pred_checked += n;
            runs.sim_pred_mismatches += mismatches;
            runs.sizes.push(size);
        }
        runs.elapsed = start.elapsed();
        runs
    })
}

fn criterion_3() -> Outcome {
    let runs = oracle_runs();
    let r = &runs.report;
    for (n, sigma, d, b) in &runs.sizes {
        println!("    corpus n={n} sigma={sigma} D={d} b={b}");
    }
    for d in &r.details {
        println!("    mismatch: {d}");
    }
    ensure(r.patterns == ORACLE_CORPORA * ORACLE_PATTERNS, || {
        format!("{} patterns run", r.patterns)
    })?;
    ensure(r.mismatches == 0, || {
        format!("{} of {} comparisons differ", r.mismatches, r.comparisons)
    })?;
    ensure(runs.elapsed < ORACLE_TIME_LIMIT, || {
        format!("took {:?}", runs.elapsed)
    })?;
    Ok(format!(
        "{} patterns ({} present) on {} corpora, {} comparisons, 0 mismatches, {:.1?}",
        r.patterns, r.present, ORACLE_CORPORA, r.comparisons, runs.elapsed
    ))
}

fn criterion_4() -> Outcome {
    let r = &oracle_runs().report;
    ensure(r.visited_violations == 0, || {
        format!(
            "{} listings exceeded 2 docc + 1 intervals",
            r.visited_violations
        )
    })?;
    ensure(r.block_violations == 0, || {
        format!("{} scanned blocks yielded nothing new", r.block_violations)
    })?;
    ensure(r.blocks_scanned > 0, || {
        "blocked listing never scanned a full block".into()
    })?;
    Ok(format!(
        "visited <= 2 docc + 1 on all {} present patterns (max ratio {:.2} per document); \
         {} blocks scanned, each with a new document",
        r.present, r.max_visited_per_doc, r.blocks_scanned
    ))
}

fn bitvector_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checked = 0;
    for t in 0..BITMAPS {
        let len = if t % 1000 == 0 {
            rng.gen_range(10_000..200_000)
        } else {
            rng.gen_range(0..1100)
        };
        let p: f64 = *[0.0, 0.01, 0.5, 0.99, 1.0, rng.gen::<f64>()]
            .choose(rng)
            .unwrap();
        let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(p)).collect();
        let bv = BitVector::from_bits(bits.iter().copied());
        let mut ones = 0;
        let mut zeros = 0;
        let check =
            |cond: bool, what: &str| ensure(cond, || format!("bitmap {t} (len {len}): {what}"));
        check(bv.rank(true, 0).unwrap() == 0, "rank at 0")?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                ones += 1;
                check(bv.select(true, ones).unwrap() == i + 1, "select1")?;
            } else {
                zeros += 1;
                check(bv.select(false, zeros).unwrap() == i + 1, "select0")?;
            }
            check(bv.access(i + 1).unwrap() == b, "access")?;
            check(bv.rank(true, i + 1).unwrap() == ones, "rank1")?;
            check(bv.rank(false, i + 1).unwrap() == zeros, "rank0")?;
        }
        check(
            bv.select(true, ones + 1).is_err() && bv.select(false, zeros + 1).is_err(),
            "select past end",
        )?;
        checked += 1;
    }
    Ok(checked)
}

fn leftmost_extremum(a: &[u32], sp: usize, ep: usize, mode: RmqMode) -> usize {
    let mut best = sp;
    for p in sp + 1..=ep {
        let better = match mode {
            RmqMode::Min => a[p - 1] < a[best - 1],
            RmqMode::Max => a[p - 1] > a[best - 1],
        };
        if better {
            best = p;
        }
    }
    best
}

fn rmq_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut queries = 0;
    for n in 1..=64usize {
        for _ in 0..20 {
            let a: Vec<u32> = (0..n)
                .map(|_| rng.gen_range(0..=(n as u32 / 2 + 1)))
                .collect();
            for mode in [RmqMode::Min, RmqMode::Max] {
                let rmq = RmqIndex::build(&a, mode).unwrap();
                for sp in 1..=n {
                    for ep in sp..=n {
                        let got = rmq.query(&a, sp, ep).unwrap();
                        let want = leftmost_extremum(&a, sp, ep, mode);
                        ensure(got == want, || {
                            format!("n={n} {mode:?} [{sp},{ep}]: {got} vs {want} on {a:?}")
                        })?;
                        queries += 1;
                    }
                }
            }
        }
    }
    for n in [100, 1_000, 10_000, 100_000] {
        for range in [3u32, 1_000_000] {
            let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..range)).collect();
            for mode in [RmqMode::Min, RmqMode::Max] {
                let rmq = RmqIndex::build(&a, mode).unwrap();
                for _ in 0..2000 {
                    let x = rng.gen_range(1..=n);
                    let y = rng.gen_range(1..=n);
                    let (sp, ep) = (x.min(y), x.max(y));
                    let got = rmq.query(&a, sp, ep).unwrap();
                    let want = leftmost_extremum(&a, sp, ep, mode);
                    ensure(got == want, || {
                        format!("n={n} {mode:?} [{sp},{ep}]: {got} vs {want}")
                    })?;
                    queries += 1;
                }
            }
        }
    }
    Ok(queries)
}

fn init_array_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut ops = 0;
    for len in [1usize, 63, 64, 65, 1000, 100_000] {
        let mut arr = InitializableArray::new(len, 7);
        let mut plain = vec![7u64; len];
        arr.scribble(|| rng.gen());
        arr.init(len, 3);
        plain.fill(3);
        let mut touched = std::collections::HashSet::new();
        for step in 0..200_000 {
            if step % 50_000 == 49_999 {
                let fill = rng.gen_range(0..5);
                if step % 100_000 == 99_999 {
                    arr.scribble(|| rng.gen());
                }
                arr.init(len, fill);
                plain.fill(fill);
                touched.clear();
                ensure(arr.top() == 0, || "init left live words".into())?;
            }
            let i = rng.gen_range(1..=len);
            if rng.gen_bool(0.4) {
                let v = rng.gen_range(0..10);
                arr.write(i, v).unwrap();
                plain[i - 1] = v;
                touched.insert((i - 1) / 64);
            } else {
                let got = arr.read(i).unwrap();
                ensure(got == plain[i - 1], || {
                    format!(
                        "len {len} step {step}: read {i} gave {got}, want {}",
                        plain[i - 1]
                    )
                })?;
            }
            ensure(arr.top() <= touched.len(), || {
                "more live words than touched".into()
            })?;
            ops += 1;
        }
        for i in 1..=len {
            ensure(arr.read(i).unwrap() == plain[i - 1], || {
                format!("final sweep mismatch at {i}")
            })?;
        }
    }
    Ok(ops)
}

fn wavelet_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checks = 0;
    for t in 0..60 {
        let n = rng.gen_range(1..3000);
        let lo = if t % 3 == 0 { 0 } else { rng.gen_range(0..5) };
        let hi = lo + rng.gen_range(0..[1u32, 3, 50, 1000][t % 4]);
        let data: Vec<u32> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
        let wt = WaveletTree::build_range(&data, lo, hi).unwrap();
        let fail = |what: String| format!("tree {t} (n {n}, [{lo}..{hi}]): {what}");
        for i in 1..=n {
            ensure(wt.access(i).unwrap() == data[i - 1], || {
                fail(format!("access {i}"))
            })?;
        }
        let mut symbols: Vec<u32> = data.clone();
        symbols.sort_unstable();
        symbols.dedup();
        for &c in symbols.iter().take(20) {
            let positions: Vec<usize> = (1..=n).filter(|&i| data[i - 1] == c).collect();
            for (j, &p) in positions.iter().enumerate() {
                ensure(wt.select(c, j + 1).unwrap() == p, || {
                    fail(format!("select {c} {}", j + 1))
                })?;
                ensure(wt.rank(c, p).unwrap() == j + 1, || {
                    fail(format!("rank {c} {p}"))
                })?;
            }
            checks += positions.len();
        }
        for _ in 0..300 {
            let x = rng.gen_range(1..=n);
            let y = rng.gen_range(1..=n);
            let (sp, ep) = (x.min(y), x.max(y));
            let mut slice = data[sp - 1..ep].to_vec();
            slice.sort_unstable();
            let q = rng.gen_range(1..=slice.len());
            let sym = slice[q - 1];
            let freq = slice.iter().filter(|&&v| v == sym).count();
            ensure(wt.quantile(sp, ep, q).unwrap() == (sym, freq), || {
                fail(format!("quantile [{sp},{ep}] q={q}"))
            })?;
            let bound = rng.gen_range(0..=hi as u64 + 2);
            let less = slice.iter().filter(|&&v| (v as u64) < bound).count();
            ensure(wt.count_less(sp, ep, bound).unwrap() == less, || {
                fail(format!("count_less [{sp},{ep}] < {bound}"))
            })?;
            let c = rng.gen_range(lo..=hi);
            let i = rng.gen_range(0..=n);
            let r = data[..i].iter().filter(|&&v| v == c).count();
            ensure(wt.rank(c, i).unwrap() == r, || {
                fail(format!("rank {c} {i}"))
            })?;
            checks += 4;
        }
    }
    Ok(checks)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let bitmaps = bitvector_suite(&mut rng)?;
    let rmq = rmq_suite(&mut rng)?;
    let init = init_array_suite(&mut rng)?;
    let wavelet = wavelet_suite(&mut rng)?;
    let runs = oracle_runs();
    ensure(runs.sim_pred_mismatches == 0, || {
        format!(
            "sim_pred differs from L at {} cells",
            runs.sim_pred_mismatches
        )
    })?;
    Ok(format!(
        "{bitmaps} bitmaps, {rmq} range queries, {init} initializable-array ops, {wavelet} wavelet checks, \
         sim_pred = L on {} cells; 0 mismatches",
        runs.sim_pred_checked
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut queries = 0;
    for t in 0..SERIALIZATION_CORPORA {
        let sigma = SIGMAS[t % SIGMAS.len()];
        let docs = rng.gen_range(1..60);
        let n = rng.gen_range(docs..5000);
        let mut coll = corpus::random_collection(&mut rng, n, sigma, docs).unwrap();
        if t % 2 == 0 {
            let names = (0..coll.num_docs()).map(|d| format!("doc-{d}")).collect();
            coll = coll.with_names(names).unwrap();
        }
        let weights = corpus::random_weights(&mut rng, coll.num_docs());
        let engine = QueryEngine::with_config(
            TextIndex::build(&coll).unwrap(),
            EngineConfig {
                block_factor: Some(rng.gen_range(1..20)),
                weights: (t % 3 != 0).then(|| weights.clone()),
                ..Default::default()
            },
        )
        .unwrap();
        let mut first = Vec::new();
        format::save(&engine, &mut first).map_err(|e| e.to_string())?;
        let loaded = format::load(&mut first.as_slice()).map_err(|e| format!("corpus {t}: {e}"))?;
        let mut second = Vec::new();
        format::save(&loaded, &mut second).map_err(|e| e.to_string())?;
        ensure(first == second, || {
            format!("corpus {t}: re-saved file differs")
        })?;

        for p in corpus::random_patterns(&mut rng, &coll, 30, 0.8, 8) {
            let same = |what: &str, ok: bool| {
                ensure(ok, || format!("corpus {t} pattern {p:?}: {what} differs"))
            };
            same(
                "range",
                engine.pattern_range(&p).unwrap() == loaded.pattern_range(&p).unwrap(),
            )?;
            same(
                "topk",
                engine.topk_frequent(&p, 5).unwrap() == loaded.topk_frequent(&p, 5).unwrap(),
            )?;
            same(
                "topk_important",
                engine.topk_important(&p, 5, &weights).unwrap()
                    == loaded.topk_important(&p, 5, &weights).unwrap(),
            )?;
            if let Some((sp, ep)) = engine.pattern_range(&p).unwrap() {
                for a in [ListAlgo::Rmq, ListAlgo::Marking, ListAlgo::Blocked] {
                    same(
                        "list",
                        engine.list(sp, ep, a).unwrap().0 == loaded.list(sp, ep, a).unwrap().0,
                    )?;
                }
                for b in seqdocs_cli::check::FREQ_BACKENDS {
                    same(
                        "listfreq",
                        engine.list_with_freq(sp, ep, b).unwrap()
                            == loaded.list_with_freq(sp, ep, b).unwrap(),
                    )?;
                }
                same(
                    "df",
                    engine.doc_frequency(sp, ep).unwrap() == loaded.doc_frequency(sp, ep).unwrap(),
                )?;
            }
            queries += 1;
        }
    }
    Ok(format!(
        "{SERIALIZATION_CORPORA} corpora re-saved byte-identically; {queries} patterns answered identically after load"
    ))
}

struct PerfCorpus {
    engine: QueryEngine,
    markers: Vec<Vec<u32>>,
    bytes: usize,
}

/// Random lowercase documents with `PERF_MARKERS` uppercase markers, each
/// planted once in exactly `PERF_DOCC` documents.
fn perf_corpus(total: usize, seed: u64) -> PerfCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num_docs = total / PERF_DOC_BYTES;
    let mut docs: Vec<Vec<u8>> = (0..num_docs)
        .map(|_| {
            (0..PERF_DOC_BYTES)
                .map(|_| rng.gen_range(b'a'..=b'z'))
                .collect()
        })
        .collect();
    let mut markers = Vec::new();
    let mut ids: Vec<usize> = (0..num_docs).collect();
    for m in 0..PERF_MARKERS {
        let marker: Vec<u8> = format!("QX{:02}", m)
            .bytes()
            .map(|b| {
                if b.is_ascii_digit() {
                    b'A' + (b - b'0')
                } else {
                    b
                }
            })
            .collect();
        ids.shuffle(&mut rng);
        for &d in &ids[..PERF_DOCC] {
            let at = rng.gen_range(0..PERF_DOC_BYTES - marker.len());
            docs[d][at..at + marker.len()].copy_from_slice(&marker);
        }
        markers.push(marker);
    }
    let bytes = docs.iter().map(Vec::len).sum();
    let coll = DocumentCollection::from_bytes(&docs, b'\n').unwrap();
    drop(docs);
    let idx = TextIndex::build(&coll).unwrap();
    drop(coll);
    let markers = markers
        .iter()
        .map(|m| idx.encode_bytes(m).unwrap())
        .collect();
    PerfCorpus {
        engine: QueryEngine::new(idx).unwrap(),
        markers,
        bytes,
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Median latency in milliseconds of `f` over all markers.
fn marker_latency(
    c: &PerfCorpus,
    f: impl Fn(&QueryEngine, &[u32]) -> usize,
) -> Result<f64, String> {
    let mut samples = Vec::new();
    for m in &c.markers {
        f(&c.engine, m);
    }
    for _ in 0..PERF_REPEAT {
        for m in &c.markers {
            let start = Instant::now();
            let got = f(&c.engine, m);
            samples.push(start.elapsed().as_secs_f64() * 1e3);
            ensure(got == PERF_DOCC, || {
                format!("marker returned {got} documents")
            })?;
        }
    }
    Ok(median(samples))
}

fn list_marker(e: &QueryEngine, p: &[u32]) -> usize {
    let (sp, ep) = e.pattern_range(p).unwrap().unwrap();
    e.list_rmq(sp, ep).unwrap().len()
}

fn topk_marker(e: &QueryEngine, p: &[u32]) -> usize {
    let (sp, ep) = e.pattern_range(p).unwrap().unwrap();
    e.topk_frequent_range(sp, ep, PERF_DOCC).unwrap().len()
}

fn criterion_7() -> Outcome {
    let small = perf_corpus(SMALL_CORPUS_BYTES, 71);
    let small_list = marker_latency(&small, list_marker)?;
    let small_n = small.engine.index().len();
    let small_bytes = small.bytes;
    drop(small);

    let build = Instant::now();
    let large = perf_corpus(LARGE_CORPUS_BYTES, 72);
    let build = build.elapsed();
    let large_n = large.engine.index().len();
    let large_list = marker_latency(&large, list_marker)?;
    let large_topk = marker_latency(&large, topk_marker)?;

    let size_ratio = large_n as f64 / small_n as f64;
    let latency_ratio = large_list / small_list;
    println!(
        "    corpora {small_bytes} and {} bytes; listing median {small_list:.4} ms vs {large_list:.4} ms \
         (latency x{latency_ratio:.2}, size x{size_ratio:.2}); index build {build:.1?}",
        large.bytes
    );
    let per_result_list = large_list / PERF_DOCC as f64;
    let per_result_topk = large_topk / PERF_DOCC as f64;
    let topk_factor = per_result_topk / per_result_list;
    println!("    per result: listing {per_result_list:.5} ms, top-{PERF_DOCC} {per_result_topk:.5} ms (x{topk_factor:.2})");

    let patterns: Vec<BenchPattern> = large
        .markers
        .iter()
        .enumerate()
        .map(|(i, m)| BenchPattern {
            label: format!("marker{i}"),
            len: m.len(),
            symbols: Some(m.clone()),
        })
        .collect();
    let algos: Vec<BenchAlgo> = ["rmq", "mark", "blocked", "rank", "dfs", "df", "topk"]
        .iter()
        .map(|a| BenchAlgo::parse(a).unwrap())
        .collect();
    let rows = bench::run_bench(&large.engine, &patterns, &algos, 5, PERF_DOCC, 1)
        .map_err(|e| e.to_string())?;
    let space = bench::space_table(&large.engine).map_err(|e| e.to_string())?;
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let csv_path = dir.join("acceptance_bench.csv");
    bench::write_csv(
        &rows,
        std::fs::File::create(&csv_path).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    bench::write_space_csv(
        &space,
        std::fs::File::create(bench::space_csv_path(&csv_path)).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    for (name, _, bpc) in &space {
        println!("    space {name:<14} {bpc:8.3} bpc");
    }
    println!("    bench CSV: {}", csv_path.display());

    ensure(latency_ratio < size_ratio, || {
        format!("listing latency grew x{latency_ratio:.2} for a x{size_ratio:.2} larger corpus")
    })?;
    ensure(topk_factor <= TOPK_PER_RESULT_FACTOR, || {
        format!("per-result top-k latency is x{topk_factor:.2} the listing latency")
    })?;
    ensure(rows.len() == algos.len() * patterns.len(), || {
        "bench row count".into()
    })?;
    ensure(
        rows.iter()
            .all(|r| r.space_bpc > 0.0 && r.docc == PERF_DOCC),
        || "bench rows incomplete".into(),
    )?;
    ensure(space.iter().all(|(_, bytes, _)| *bytes > 0), || {
        "empty space entry".into()
    })?;
    Ok(format!(
        "listing latency x{latency_ratio:.2} for size x{size_ratio:.2}; top-k per result x{topk_factor:.2} \
         of listing (limit x{TOPK_PER_RESULT_FACTOR}); CSV with {} rows and {} space entries",
        rows.len(),
        space.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("golden running-example suite", criterion_1),
        ("blocked-listing counterexample", criterion_2),
        ("oracle equivalence on random corpora", criterion_3),
        ("output-sensitivity bounds", criterion_4),
        ("structure micro-suites", criterion_5),
        ("serialization round trip", criterion_6),
        ("performance sanity", criterion_7),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("[PASS] criterion {id}: {name}: {detail} [{elapsed:.1?}]"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {id}: {name}: {detail} [{elapsed:.1?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
