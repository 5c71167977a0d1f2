//! Differential comparison of every query backend against the oracle.

use std::collections::HashMap;

use seqdocs::oracle::{top_by_freq, top_by_weight, NaiveCorpus};
use seqdocs::retrieval::{BlockOrder, ListAlgo, RecursionOrder};
use seqdocs::{FreqBackend, HitList, QueryEngine};

pub const FREQ_BACKENDS: [FreqBackend; 5] = [
    FreqBackend::Rank,
    FreqBackend::Dfs,
    FreqBackend::Quantile,
    FreqBackend::LocalSa,
    FreqBackend::ExpSearch,
];

pub const TOPK_VALUES: [usize; 4] = [1, 5, 10, 100];

const MAX_REPORTED: usize = 20;

#[derive(Debug, Clone, Default)]
pub struct DiffReport {
    pub patterns: usize,
    pub present: usize,
    pub comparisons: usize,
    pub mismatches: usize,
    /// First few mismatch descriptions.
    pub details: Vec<String>,
    /// Listings whose visited-interval count exceeded `2 docc + 1`.
    pub visited_violations: usize,
    /// Blocks scanned by blocked listing that produced no new document.
    pub block_violations: usize,
    pub blocks_scanned: usize,
    pub max_visited_per_doc: f64,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.visited_violations == 0 && self.block_violations == 0
    }

    fn compare<T: PartialEq + std::fmt::Debug>(
        &mut self,
        what: &str,
        pattern: &[u32],
        got: T,
        want: T,
    ) {
        self.comparisons += 1;
        if got != want {
            self.mismatches += 1;
            if self.details.len() < MAX_REPORTED {
                self.details
                    .push(format!("{what} on {pattern:?}: got {got:?}, want {want:?}"));
            }
        }
    }

    pub fn merge(&mut self, other: DiffReport) {
        self.patterns += other.patterns;
        self.present += other.present;
        self.comparisons += other.comparisons;
        self.mismatches += other.mismatches;
        let room = MAX_REPORTED.saturating_sub(self.details.len());
        self.details.extend(other.details.into_iter().take(room));
        self.visited_violations += other.visited_violations;
        self.block_violations += other.block_violations;
        self.blocks_scanned += other.blocks_scanned;
        self.max_visited_per_doc = self.max_visited_per_doc.max(other.max_visited_per_doc);
    }
}

fn sorted_docs(h: &HitList) -> Vec<u32> {
    let mut d = h.docs();
    d.sort_unstable();
    d
}

fn pairs(h: &HitList) -> Vec<(u32, usize)> {
    h.entries
        .iter()
        .map(|x| (x.doc, x.freq.unwrap_or(0) as usize))
        .collect()
}

/// Runs every backend on every pattern. `order` selects the recursion order
/// of marking-based listing so a faulty order can be exercised.
pub fn differential(
    e: &QueryEngine,
    naive: &NaiveCorpus,
    patterns: &[Vec<u32>],
    weights: &[f64],
    order: RecursionOrder,
) -> DiffReport {
    let mut r = DiffReport::default();
    for p in patterns {
        r.patterns += 1;
        let freqs = naive.frequencies(p).expect("valid pattern");
        let range = e.pattern_range(p).expect("valid pattern");
        r.compare("occurs", p, range.is_some(), !freqs.is_empty());
        if let Err(msg) = check_one(e, p, &freqs, range, weights, order, &mut r) {
            r.compare("query error", p, msg, String::new());
        }
        r.compare("marks clean", p, e.marks_clean(), true);
    }
    r
}

fn check_one(
    e: &QueryEngine,
    p: &[u32],
    freqs: &[(u32, usize)],
    range: Option<(usize, usize)>,
    weights: &[f64],
    order: RecursionOrder,
    r: &mut DiffReport,
) -> Result<(), String> {
    let err = |e: seqdocs::Error| e.to_string();
    let want_docs: Vec<u32> = freqs.iter().map(|&(d, _)| d).collect();
    for k in TOPK_VALUES {
        r.compare(
            "topk",
            p,
            pairs(&e.topk_frequent(p, k).map_err(err)?),
            top_by_freq(freqs.to_vec(), k),
        );
        r.compare(
            "topk_important",
            p,
            pairs(&e.topk_important(p, k, weights).map_err(err)?),
            top_by_weight(freqs.to_vec(), k, weights),
        );
    }
    let Some((sp, ep)) = range else {
        return Ok(());
    };
    r.present += 1;
    let docc = want_docs.len();

    let (rmq, rmq_stats) = e.list(sp, ep, ListAlgo::Rmq).map_err(err)?;
    let (mark, mark_stats) = e.list_marking_ordered(sp, ep, order).map_err(err)?;
    let (blocked, blocked_stats) = e
        .list_blocked_ordered(sp, ep, BlockOrder::LeftBlockRight)
        .map_err(err)?;
    r.compare("list rmq", p, sorted_docs(&rmq), want_docs.clone());
    r.compare("list mark", p, sorted_docs(&mark), want_docs.clone());
    r.compare("list blocked", p, sorted_docs(&blocked), want_docs.clone());
    r.compare("rmq/mark sequence", p, mark.docs(), rmq.docs());
    for v in [rmq_stats.visited_intervals, mark_stats.visited_intervals] {
        if v > 2 * docc + 1 {
            r.visited_violations += 1;
        }
        r.max_visited_per_doc = r.max_visited_per_doc.max(v as f64 / docc as f64);
    }
    r.block_violations += blocked_stats.empty_block_scans;
    r.blocks_scanned += blocked_stats.blocks_scanned;

    r.compare("df", p, e.doc_frequency(sp, ep).map_err(err)?, docc);
    for b in FREQ_BACKENDS {
        let mut got = pairs(&e.list_with_freq(sp, ep, b).map_err(err)?);
        got.sort_unstable();
        r.compare(&format!("listfreq {b:?}"), p, got, freqs.to_vec());
    }
    let want: HashMap<u32, usize> = freqs.iter().copied().collect();
    let right: HashMap<u32, usize> = e
        .rightmost_occurrences(sp, ep)
        .map_err(err)?
        .into_iter()
        .collect();
    for (d, first) in e.leftmost_occurrences(sp, ep).map_err(err)? {
        let last = right
            .get(&d)
            .copied()
            .ok_or("document without rightmost occurrence")?;
        r.compare(
            "tf_local",
            p,
            e.tf_local(d, first, last).map_err(err)?,
            want[&d],
        );
        r.compare(
            "tf_expsearch",
            p,
            e.tf_expsearch(d, first, ep).map_err(err)?,
            want[&d],
        );
    }
    Ok(())
}
