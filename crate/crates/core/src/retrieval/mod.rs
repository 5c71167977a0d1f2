//! Query algorithms over a [`TextIndex`]: document listing, listing with
//! term frequencies, document frequency and top-k retrieval.
//!
//! Range-level entry points take a suffix-array interval `[sp, ep]`;
//! pattern-level ones locate the pattern first.

mod importance;
mod listing;
mod marks;

use std::sync::OnceLock;

pub use importance::ImportanceIndex;
pub use listing::{
    default_block_factor, predecessor_array, BlockMinima, BlockOrder, ColorIndex, ListingStats,
    RecursionOrder,
};
pub use marks::ResetStrategy;

use listing::{Colors, ExtremumWalk};
use marks::MarkPool;

use crate::error::{check_interval, Error, Result};
use crate::succinct::{RmqIndex, RmqMode, SpaceUsage};
use crate::text_index::TextIndex;
use crate::wavelet::{TopFrequent, WaveletTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hit {
    pub doc: u32,
    pub freq: Option<u32>,
}

impl Hit {
    pub fn doc(doc: u32) -> Self {
        Hit { doc, freq: None }
    }

    pub fn with_freq(doc: u32, freq: usize) -> Self {
        Hit {
            doc,
            freq: Some(freq as u32),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HitList {
    pub entries: Vec<Hit>,
    /// Whether every qualifying document was produced.
    pub exhausted: bool,
}

impl HitList {
    pub fn complete(entries: Vec<Hit>) -> Self {
        HitList {
            entries,
            exhausted: true,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn docs(&self) -> Vec<u32> {
        self.entries.iter().map(|h| h.doc).collect()
    }

    /// `(doc, freq)` pairs sorted by document; missing frequencies read 0.
    pub fn sorted_pairs(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = self
            .entries
            .iter()
            .map(|h| (h.doc, h.freq.unwrap_or(0)))
            .collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListAlgo {
    Rmq,
    Marking,
    Blocked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqBackend {
    /// Listing plus rank differences on the document array.
    Rank,
    /// Depth-first traversal of the document-array wavelet tree.
    Dfs,
    /// Successive range quantiles.
    Quantile,
    /// Leftmost and rightmost occurrences mapped into local suffix arrays.
    LocalSa,
    /// Leftmost occurrence plus exponential search in the local suffix array.
    ExpSearch,
}

impl std::str::FromStr for ListAlgo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rmq" => Ok(ListAlgo::Rmq),
            "mark" | "marking" => Ok(ListAlgo::Marking),
            "blocked" => Ok(ListAlgo::Blocked),
            _ => Err(Error::UnknownAlgo(s.into())),
        }
    }
}

impl std::str::FromStr for FreqBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank" => Ok(FreqBackend::Rank),
            "dfs" => Ok(FreqBackend::Dfs),
            "quantile" => Ok(FreqBackend::Quantile),
            "local" => Ok(FreqBackend::LocalSa),
            "expsearch" => Ok(FreqBackend::ExpSearch),
            _ => Err(Error::UnknownAlgo(s.into())),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EngineConfig {
    /// Block factor for blocked listing; `None` picks the default.
    pub block_factor: Option<usize>,
    pub weights: Option<Vec<f64>>,
    pub reset: ResetStrategy,
}

/// Read-only query structures plus a pool of per-query scratch arrays.
/// Queries may run concurrently; each borrows its own scratch array.
#[derive(Debug)]
pub struct QueryEngine {
    pub(crate) idx: TextIndex,
    pub(crate) rmq_min_pred: RmqIndex,
    pub(crate) rmq_max_succ: RmqIndex,
    pub(crate) wt_docs: WaveletTree,
    pub(crate) wt_pred: WaveletTree,
    pub(crate) blocks: BlockMinima,
    pub(crate) importance: Option<ImportanceIndex>,
    marks: MarkPool,
    uniform: OnceLock<ImportanceIndex>,
}

impl QueryEngine {
    pub fn new(idx: TextIndex) -> Result<Self> {
        Self::with_config(idx, EngineConfig::default())
    }

    pub fn with_config(idx: TextIndex, config: EngineConfig) -> Result<Self> {
        let n = idx.len();
        let b = config
            .block_factor
            .unwrap_or_else(|| default_block_factor(n));
        let rmq_min_pred = RmqIndex::build(&idx.pred, RmqMode::Min)?;
        let rmq_max_succ = RmqIndex::build(&idx.succ, RmqMode::Max)?;
        let wt_docs = WaveletTree::build(&idx.doc_array, idx.num_docs() as u32)?;
        let wt_pred = WaveletTree::build_range(&idx.pred, 0, n as u32)?;
        let blocks = BlockMinima::build(&idx.pred, b)?;
        let importance = match &config.weights {
            Some(w) => Some(Self::importance_for(&idx, w)?),
            None => None,
        };
        Ok(Self::from_parts(
            idx,
            rmq_min_pred,
            rmq_max_succ,
            wt_docs,
            wt_pred,
            blocks,
            importance,
            config.reset,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        idx: TextIndex,
        rmq_min_pred: RmqIndex,
        rmq_max_succ: RmqIndex,
        wt_docs: WaveletTree,
        wt_pred: WaveletTree,
        blocks: BlockMinima,
        importance: Option<ImportanceIndex>,
        reset: ResetStrategy,
    ) -> Self {
        let marks = MarkPool::new(idx.num_docs(), reset);
        QueryEngine {
            idx,
            rmq_min_pred,
            rmq_max_succ,
            wt_docs,
            wt_pred,
            blocks,
            importance,
            marks,
            uniform: OnceLock::new(),
        }
    }

    fn importance_for(idx: &TextIndex, weights: &[f64]) -> Result<ImportanceIndex> {
        if weights.len() != idx.num_docs() {
            return Err(Error::WeightDimensionMismatch {
                expected: idx.num_docs(),
                got: weights.len(),
            });
        }
        ImportanceIndex::build(&idx.doc_array, weights)
    }

    /// Replaces the stored document weights.
    pub fn set_weights(&mut self, weights: &[f64]) -> Result<()> {
        self.importance = Some(Self::importance_for(&self.idx, weights)?);
        Ok(())
    }

    pub fn index(&self) -> &TextIndex {
        &self.idx
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.importance.as_ref().map(ImportanceIndex::weights)
    }

    pub fn block_factor(&self) -> usize {
        self.blocks.b
    }

    pub fn block_minima(&self) -> &BlockMinima {
        &self.blocks
    }

    pub fn doc_wavelet(&self) -> &WaveletTree {
        &self.wt_docs
    }

    pub fn pred_wavelet(&self) -> &WaveletTree {
        &self.wt_pred
    }

    pub fn pred_rmq(&self) -> &RmqIndex {
        &self.rmq_min_pred
    }

    pub fn succ_rmq(&self) -> &RmqIndex {
        &self.rmq_max_succ
    }

    /// True when no scratch array holds a mark.
    pub fn marks_clean(&self) -> bool {
        self.marks.all_clear()
    }

    pub fn pattern_range(&self, pattern: &[u32]) -> Result<Option<(usize, usize)>> {
        self.idx.pattern_range(pattern)
    }

    fn colors(&self) -> Colors<'_> {
        Colors {
            colors: &self.idx.doc_array,
            pred: &self.idx.pred,
            rmq: &self.rmq_min_pred,
            blocks: &self.blocks,
        }
    }

    fn check(&self, sp: usize, ep: usize) -> Result<()> {
        check_interval(sp, ep, self.idx.len())
    }

    /// Streams `(doc, leftmost cell)` for each distinct document of
    /// `C[sp, ep]` in preorder of the minimum recursion over `L`.
    pub fn leftmost_occurrences(
        &self,
        sp: usize,
        ep: usize,
    ) -> Result<impl Iterator<Item = (u32, usize)> + '_> {
        self.check(sp, ep)?;
        Ok(
            ExtremumWalk::new(&self.idx.pred, &self.rmq_min_pred, sp, ep, sp as u32)
                .map(move |p| (self.idx.doc_array[p - 1], p)),
        )
    }

    pub fn list_rmq(&self, sp: usize, ep: usize) -> Result<HitList> {
        Ok(self.colors().list_rmq(sp, ep)?.0)
    }

    pub fn list_marking(&self, sp: usize, ep: usize) -> Result<HitList> {
        Ok(self
            .list_marking_ordered(sp, ep, RecursionOrder::LeftFirst)?
            .0)
    }

    pub fn list_blocked(&self, sp: usize, ep: usize) -> Result<HitList> {
        Ok(self
            .list_blocked_ordered(sp, ep, BlockOrder::LeftBlockRight)?
            .0)
    }

    /// Listing with instrumentation.
    pub fn list(&self, sp: usize, ep: usize, algo: ListAlgo) -> Result<(HitList, ListingStats)> {
        match algo {
            ListAlgo::Rmq => self.colors().list_rmq(sp, ep),
            ListAlgo::Marking => self.list_marking_ordered(sp, ep, RecursionOrder::LeftFirst),
            ListAlgo::Blocked => self.list_blocked_ordered(sp, ep, BlockOrder::LeftBlockRight),
        }
    }

    pub fn list_marking_ordered(
        &self,
        sp: usize,
        ep: usize,
        order: RecursionOrder,
    ) -> Result<(HitList, ListingStats)> {
        self.colors().list_marking(sp, ep, order, &self.marks)
    }

    pub fn list_blocked_ordered(
        &self,
        sp: usize,
        ep: usize,
        order: BlockOrder,
    ) -> Result<(HitList, ListingStats)> {
        self.colors().list_blocked(sp, ep, order, &self.marks)
    }

    /// Each distinct document of `C[sp, ep]` with the cell of its rightmost
    /// occurrence, found by maximum queries over `NXT`.
    pub fn rightmost_occurrences(&self, sp: usize, ep: usize) -> Result<Vec<(u32, usize)>> {
        self.check(sp, ep)?;
        Ok(
            ExtremumWalk::new(&self.idx.succ, &self.rmq_max_succ, sp, ep, ep as u32)
                .map(|p| (self.idx.doc_array[p - 1], p))
                .collect(),
        )
    }

    fn check_doc_at(&self, d: u32, i: usize) -> Result<()> {
        let found = self.idx.doc_of_suffix(i)?;
        if found != d {
            return Err(Error::DocMismatch {
                pos: i,
                expected: d,
                found,
            });
        }
        Ok(())
    }

    /// Frequency of document `d` from its first and last cells `i`, `i_last`.
    pub fn tf_local(&self, d: u32, i: usize, i_last: usize) -> Result<usize> {
        self.check_doc_at(d, i)?;
        self.check_doc_at(d, i_last)?;
        if i_last < i {
            return Err(Error::interval(i, i_last, self.idx.len()));
        }
        let (_, j) = self.idx.global_to_local(i)?;
        let (_, j_last) = self.idx.global_to_local(i_last)?;
        Ok(j_last - j + 1)
    }

    /// Frequency of document `d` in `[i, ep]` from its first cell `i`, by
    /// exponential then binary search over the local suffix array.
    pub fn tf_expsearch(&self, d: u32, i: usize, ep: usize) -> Result<usize> {
        self.check_doc_at(d, i)?;
        self.check(i, ep)?;
        let (_, j) = self.idx.global_to_local(i)?;
        let start = self.idx.doc_start(d)?;
        let zone = self.idx.doc_len(d)? + 1;
        let inside = |jj: usize| self.idx.local_to_global_unchecked(start, jj) <= ep;
        // Largest j' >= j with A_d[j'] mapping into [.., ep].
        let mut good = j;
        let mut step = 1;
        while j + step <= zone && inside(j + step) {
            good = j + step;
            step *= 2;
        }
        let mut hi = (j + step).min(zone + 1); // first known-bad or past end
        while hi - good > 1 {
            let mid = good + (hi - good) / 2;
            if inside(mid) {
                good = mid;
            } else {
                hi = mid;
            }
        }
        Ok(good - j + 1)
    }

    /// Distinct documents of `C[sp, ep]` with their frequencies.
    pub fn list_with_freq(&self, sp: usize, ep: usize, backend: FreqBackend) -> Result<HitList> {
        self.check(sp, ep)?;
        let entries = match backend {
            FreqBackend::Rank => self
                .leftmost_occurrences(sp, ep)?
                .map(|(d, _)| {
                    let f =
                        self.wt_docs.rank_unchecked(d, ep) - self.wt_docs.rank_unchecked(d, sp - 1);
                    Hit::with_freq(d, f)
                })
                .collect(),
            FreqBackend::Dfs => self
                .wt_docs
                .distinct(sp, ep)?
                .into_iter()
                .map(|(d, f)| Hit::with_freq(d, f))
                .collect(),
            FreqBackend::Quantile => {
                let mut out = Vec::new();
                let mut q = 1;
                while q <= ep - sp + 1 {
                    let (d, f) = self.wt_docs.quantile(sp, ep, q)?;
                    out.push(Hit::with_freq(d, f));
                    q += f;
                }
                out
            }
            FreqBackend::LocalSa => {
                let mut last = self.marks.take();
                for (d, p) in self.rightmost_occurrences(sp, ep)? {
                    last.set(d, p as u64);
                }
                let mut out = Vec::new();
                for (d, p) in self.leftmost_occurrences(sp, ep)? {
                    let f = self.tf_local(d, p, last.get(d) as usize)?;
                    out.push(Hit::with_freq(d, f));
                }
                out
            }
            FreqBackend::ExpSearch => {
                let mut out = Vec::new();
                for (d, p) in self.leftmost_occurrences(sp, ep)? {
                    out.push(Hit::with_freq(d, self.tf_expsearch(d, p, ep)?));
                }
                out
            }
        };
        Ok(HitList::complete(entries))
    }

    /// Number of distinct documents in `C[sp, ep]`: cells with `L[i] < sp`.
    pub fn doc_frequency(&self, sp: usize, ep: usize) -> Result<usize> {
        self.check(sp, ep)?;
        Ok(self.wt_pred.count_less_unchecked(sp, ep, sp as u64))
    }

    /// Documents of `C[sp, ep]` by decreasing frequency, ties by smaller id,
    /// produced lazily.
    pub fn top_frequent(&self, sp: usize, ep: usize) -> Result<TopFrequent<'_>> {
        self.wt_docs.top_frequent(sp, ep)
    }

    pub fn topk_frequent_range(&self, sp: usize, ep: usize, k: usize) -> Result<HitList> {
        let mut it = self.top_frequent(sp, ep)?;
        let entries: Vec<Hit> = it
            .by_ref()
            .take(k)
            .map(|(d, f)| Hit::with_freq(d, f))
            .collect();
        let exhausted = it.next().is_none();
        Ok(HitList { entries, exhausted })
    }

    /// The `k` documents where `pattern` occurs most often.
    pub fn topk_frequent(&self, pattern: &[u32], k: usize) -> Result<HitList> {
        match self.pattern_range(pattern)? {
            None => Ok(HitList::complete(Vec::new())),
            Some((sp, ep)) => self.topk_frequent_range(sp, ep, k),
        }
    }

    fn importance_index(&self, weights: &[f64]) -> Result<std::borrow::Cow<'_, ImportanceIndex>> {
        if let Some(imp) = &self.importance {
            if imp.weights.len() == weights.len()
                && imp
                    .weights
                    .iter()
                    .zip(weights)
                    .all(|(a, b)| a.to_bits() == b.to_bits())
            {
                return Ok(std::borrow::Cow::Borrowed(imp));
            }
        }
        if weights.len() == self.idx.num_docs() && weights.iter().all(|&w| w == 1.0) {
            let uniform = self.uniform.get_or_init(|| {
                Self::importance_for(&self.idx, weights).expect("uniform weights are valid")
            });
            return Ok(std::borrow::Cow::Borrowed(uniform));
        }
        Ok(std::borrow::Cow::Owned(Self::importance_for(
            &self.idx, weights,
        )?))
    }

    pub fn topk_important_range(
        &self,
        sp: usize,
        ep: usize,
        k: usize,
        weights: &[f64],
    ) -> Result<HitList> {
        let imp = self.importance_index(weights)?;
        let df = self.doc_frequency(sp, ep)?;
        let entries: Vec<Hit> = imp
            .top(sp, ep, k)?
            .into_iter()
            .map(|(d, f)| Hit::with_freq(d, f))
            .collect();
        let exhausted = entries.len() == df;
        Ok(HitList { entries, exhausted })
    }

    /// The `k` heaviest documents containing `pattern`, ties by smaller id.
    /// Weights equal to the stored ones reuse the precomputed relabeling.
    pub fn topk_important(&self, pattern: &[u32], k: usize, weights: &[f64]) -> Result<HitList> {
        let range = self.pattern_range(pattern)?;
        if weights.len() != self.idx.num_docs() {
            return Err(Error::WeightDimensionMismatch {
                expected: self.idx.num_docs(),
                got: weights.len(),
            });
        }
        match range {
            None => Ok(HitList::complete(Vec::new())),
            Some((sp, ep)) => self.topk_important_range(sp, ep, k, weights),
        }
    }

    /// Bits of each in-memory structure.
    pub fn space_report(&self) -> Vec<(&'static str, usize)> {
        let mut v = self.idx.space_report();
        v.push(("rmq_L", self.rmq_min_pred.size_in_bits()));
        v.push(("rmq_NXT", self.rmq_max_succ.size_in_bits()));
        v.push(("wt_C", self.wt_docs.size_in_bits()));
        v.push(("wt_L", self.wt_pred.size_in_bits()));
        v.push((
            "L_sampled",
            self.blocks.minima.size_in_bits() + self.blocks.rmq.size_in_bits(),
        ));
        if let Some(imp) = &self.importance {
            v.push(("weights", imp.size_in_bits()));
        }
        v
    }
}
