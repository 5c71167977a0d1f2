//! Built-in self-test: fixed running-example checks plus a randomized
//! differential run against the oracle.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqdocs::oracle::NaiveCorpus;
use seqdocs::retrieval::{BlockOrder, ColorIndex, RecursionOrder};
use seqdocs::{DocumentCollection, FreqBackend, QueryEngine, Result, TextIndex};

use crate::check::{differential, DiffReport};
use crate::corpus;

pub const RUNNING_EXAMPLE: [&str; 4] = ["mi ma ma", "la ma la", "me mi ma", "la me me"];

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub n: usize,
    pub sigma: u32,
    pub docs: usize,
    pub seed: u64,
    pub patterns: usize,
    /// Runs marking-based listing with the right subinterval first.
    pub inject_fault: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            n: 20_000,
            sigma: 4,
            docs: 50,
            seed: 42,
            patterns: 500,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn golden<T: PartialEq + std::fmt::Debug>(name: &'static str, got: T, want: T) -> GoldenCheck {
    GoldenCheck {
        name,
        passed: got == want,
        detail: format!("got {got:?}, want {want:?}"),
    }
}

pub fn running_example_engine() -> Result<(DocumentCollection, QueryEngine)> {
    let coll = DocumentCollection::from_token_docs(&RUNNING_EXAMPLE)?;
    let engine = QueryEngine::new(TextIndex::build(&coll)?)?;
    Ok((coll, engine))
}

fn sym(coll: &DocumentCollection, s: &str) -> Result<Vec<u32>> {
    Ok(coll.encode_tokens(s)?.expect("token in vocabulary"))
}

/// The fixed checks on the four-document running example and on the
/// blocked-listing counterexample.
pub fn golden_checks(order: RecursionOrder) -> Result<Vec<GoldenCheck>> {
    let (coll, e) = running_example_engine()?;
    let idx = e.index();
    let mi = sym(&coll, "mi")?;
    let ma = sym(&coll, "ma")?;
    let mut out = Vec::new();

    let (sp, ep) = idx.pattern_range(&mi)?.unwrap_or((1, 1));
    out.push(golden("(a) locate mi", idx.locate(sp, ep)?, vec![10, 1]));

    let marking = e.list_marking_ordered(11, 16, order)?.0.docs();
    out.push(golden(
        "(b) list [11,16] rmq and marking",
        (e.list_rmq(11, 16)?.docs(), marking),
        (vec![4, 1, 3], vec![4, 1, 3]),
    ));

    let pred = idx.predecessors();
    let rmq = e.pred_rmq();
    out.push(golden(
        "(c) rmq over L",
        (
            rmq.query(pred, 11, 16)?,
            rmq.query(pred, 13, 16)?,
            rmq.query(pred, 5, 11)?,
        ),
        (12, 14, 8),
    ));

    let wt = e.doc_wavelet();
    out.push(golden(
        "(d) quantile and access on C",
        (wt.quantile(5, 11, 4)?, wt.access(9)?),
        ((2, 3), 3),
    ));

    let freq: Vec<(u32, u32)> = e
        .list_with_freq(12, 15, FreqBackend::Dfs)?
        .entries
        .iter()
        .map(|h| (h.doc, h.freq.unwrap_or(0)))
        .collect();
    out.push(golden("(e) listfreq [12,15]", freq, vec![(3, 2), (4, 2)]));

    let (sp, ep) = idx.pattern_range(&ma)?.unwrap_or((1, 1));
    out.push(golden(
        "(f) df [11,16] and df ma",
        (e.doc_frequency(11, 16)?, e.doc_frequency(sp, ep)?),
        (3, 3),
    ));

    let top = e.topk_frequent(&ma, 1)?;
    let top: Vec<(u32, Option<u32>)> = top.entries.iter().map(|h| (h.doc, h.freq)).collect();
    out.push(golden("(g) top-1 ma", top, vec![(1, Some(2))]));

    out.push(golden(
        "(h) global_to_local at 10",
        (idx.global_to_local(10)?, idx.suffix_array()[9]),
        ((2, 4), 6),
    ));

    let (marked, _) = e.list_marking_ordered(5, 11, order)?;
    out.push(golden(
        "marking [5,11] matches rmq listing",
        marked.docs(),
        e.list_rmq(5, 11)?.docs(),
    ));

    let c = ColorIndex::new(vec![2, 3, 3, 3, 2, 2, 2, 2, 2, 1, 1, 1], 3, 2)?;
    let mut good = c.list_blocked(3, 12, BlockOrder::LeftBlockRight)?.0.docs();
    good.sort_unstable();
    let mut bad = c.list_blocked(3, 12, BlockOrder::BlockLeftRight)?.0.docs();
    bad.sort_unstable();
    out.push(golden(
        "blocked counterexample",
        (c.block_minima().to_vec(), good, bad),
        (vec![0, 2, 1, 6, 0, 10], vec![1, 2, 3], vec![1, 2]),
    ));
    Ok(out)
}

/// Runs the randomized differential part.
pub fn random_differential(cfg: &SelftestConfig) -> Result<DiffReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let coll = corpus::random_collection(&mut rng, cfg.n, cfg.sigma, cfg.docs)?;
    let engine = QueryEngine::new(TextIndex::build(&coll)?)?;
    let naive = NaiveCorpus::new(&coll);
    let patterns = corpus::random_patterns(&mut rng, &coll, cfg.patterns, 0.7, 20);
    let weights = corpus::random_weights(&mut rng, coll.num_docs());
    let order = if cfg.inject_fault {
        RecursionOrder::RightFirst
    } else {
        RecursionOrder::LeftFirst
    };
    Ok(differential(&engine, &naive, &patterns, &weights, order))
}

/// Prints a report and returns whether everything passed.
pub fn run(cfg: &SelftestConfig, out: &mut dyn Write) -> Result<bool> {
    let order = if cfg.inject_fault {
        RecursionOrder::RightFirst
    } else {
        RecursionOrder::LeftFirst
    };
    let mut ok = true;
    for g in golden_checks(order)? {
        ok &= g.passed;
        let tag = if g.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {}: {}", g.name, g.detail)?;
    }
    let report = random_differential(cfg)?;
    ok &= report.passed();
    writeln!(
        out,
        "{} random: {} patterns ({} present), {} comparisons, {} mismatches, \
         {} visited-bound violations, {} empty block scans",
        if report.passed() { "PASS" } else { "FAIL" },
        report.patterns,
        report.present,
        report.comparisons,
        report.mismatches,
        report.visited_violations,
        report.block_violations,
    )?;
    for d in &report.details {
        writeln!(out, "  {d}")?;
    }
    writeln!(out, "{}", if ok { "PASS" } else { "FAIL" })?;
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_checks_pass() {
        for g in golden_checks(RecursionOrder::LeftFirst).unwrap() {
            assert!(g.passed, "{}: {}", g.name, g.detail);
        }
    }

    #[test]
    fn fault_is_detected() {
        let checks = golden_checks(RecursionOrder::RightFirst).unwrap();
        let failing: Vec<_> = checks
            .iter()
            .filter(|g| !g.passed)
            .map(|g| g.name)
            .collect();
        assert!(
            failing.contains(&"marking [5,11] matches rmq listing"),
            "{failing:?}"
        );
    }

    #[test]
    fn small_random_run_passes() {
        let cfg = SelftestConfig {
            n: 3000,
            docs: 20,
            patterns: 100,
            ..Default::default()
        };
        let mut out = Vec::new();
        assert!(
            run(&cfg, &mut out).unwrap(),
            "{}",
            String::from_utf8_lossy(&out)
        );
    }
}
