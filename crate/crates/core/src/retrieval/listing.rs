//! Distinct-color listing over a color array `C` and its predecessor array
//! `L`. Document listing is the special case where `C` is the document array.

use crate::error::{check_interval, Result};
use crate::succinct::{RmqIndex, RmqMode};

use super::marks::{MarkPool, Marks, ResetStrategy};
use super::{Hit, HitList};

/// Counters gathered during one listing call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ListingStats {
    /// Nonempty intervals on which an extremum query was evaluated.
    pub visited_intervals: usize,
    /// Blocks of `L` scanned to report documents.
    pub blocks_scanned: usize,
    /// Scanned blocks that contributed no new document.
    pub empty_block_scans: usize,
    /// Blocks inspected and found fully marked, ending a branch.
    pub blocks_pruned: usize,
    /// Cells scanned in the partial blocks at both ends.
    pub tail_cells: usize,
    /// Time spent returning the marks to the unmarked state.
    pub reset_ns: u64,
}

/// Order in which the marking recursion handles the two subintervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecursionOrder {
    #[default]
    LeftFirst,
    /// Incorrect variant kept to exhibit the failure it causes.
    RightFirst,
}

/// Order in which the blocked recursion handles a reported block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockOrder {
    /// Left subinterval, block, right subinterval.
    #[default]
    LeftBlockRight,
    /// Incorrect variant: block before the left subinterval.
    BlockLeftRight,
}

/// Minimum of `L` over consecutive blocks of `b` cells, with its own
/// minimum index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMinima {
    pub(crate) b: usize,
    pub(crate) minima: Vec<u32>,
    pub(crate) rmq: RmqIndex,
}

impl BlockMinima {
    pub fn build(pred: &[u32], b: usize) -> Result<Self> {
        if b == 0 {
            return Err(crate::Error::Config(
                "block factor must be at least 1".into(),
            ));
        }
        let minima: Vec<u32> = pred
            .chunks(b)
            .map(|c| *c.iter().min().expect("nonempty chunk"))
            .collect();
        let rmq = RmqIndex::build(&minima, RmqMode::Min)?;
        Ok(BlockMinima { b, minima, rmq })
    }

    pub fn block_factor(&self) -> usize {
        self.b
    }

    pub fn minima(&self) -> &[u32] {
        &self.minima
    }

    pub fn rmq(&self) -> &RmqIndex {
        &self.rmq
    }
}

/// Default block factor `max(4, ceil(lg n)^2)`.
pub fn default_block_factor(n: usize) -> usize {
    let lg = (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize;
    (lg * lg).max(4)
}

/// Borrowed view of the arrays the listing algorithms run on.
#[derive(Clone, Copy)]
pub(crate) struct Colors<'a> {
    pub colors: &'a [u32],
    pub pred: &'a [u32],
    pub rmq: &'a RmqIndex,
    pub blocks: &'a BlockMinima,
}

/// Streaming extremum-driven listing. For `Min` over `L` it yields each
/// cell `p` with `base[p] < bound` (the leftmost occurrence of its color);
/// for `Max` over `NXT` each cell with `base[p] > bound` (the rightmost).
/// Cells come out in preorder: report, left subinterval, right subinterval.
pub(crate) struct ExtremumWalk<'a> {
    base: &'a [u32],
    rmq: &'a RmqIndex,
    bound: u32,
    stack: Vec<(usize, usize)>,
    visited: usize,
}

impl<'a> ExtremumWalk<'a> {
    pub(crate) fn new(
        base: &'a [u32],
        rmq: &'a RmqIndex,
        sp: usize,
        ep: usize,
        bound: u32,
    ) -> Self {
        ExtremumWalk {
            base,
            rmq,
            bound,
            stack: vec![(sp, ep)],
            visited: 0,
        }
    }

    pub(crate) fn visited(&self) -> usize {
        self.visited
    }

    #[inline]
    fn qualifies(&self, v: u32) -> bool {
        match self.rmq.mode() {
            RmqMode::Min => v < self.bound,
            RmqMode::Max => v > self.bound,
        }
    }
}

impl Iterator for ExtremumWalk<'_> {
    /// 1-based cell.
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while let Some((i, j)) = self.stack.pop() {
            if i > j {
                continue;
            }
            self.visited += 1;
            let p = self.rmq.query_unchecked(self.base, i, j);
            if !self.qualifies(self.base[p - 1]) {
                continue;
            }
            self.stack.push((p + 1, j));
            self.stack.push((i, p - 1));
            return Some(p);
        }
        None
    }
}

impl Colors<'_> {
    pub(crate) fn len(&self) -> usize {
        self.colors.len()
    }

    pub(crate) fn list_rmq(&self, sp: usize, ep: usize) -> Result<(HitList, ListingStats)> {
        check_interval(sp, ep, self.len())?;
        let mut walk = ExtremumWalk::new(self.pred, self.rmq, sp, ep, sp as u32);
        let entries = walk
            .by_ref()
            .map(|p| Hit::doc(self.colors[p - 1]))
            .collect();
        let stats = ListingStats {
            visited_intervals: walk.visited(),
            ..Default::default()
        };
        Ok((HitList::complete(entries), stats))
    }

    pub(crate) fn list_marking(
        &self,
        sp: usize,
        ep: usize,
        order: RecursionOrder,
        pool: &MarkPool,
    ) -> Result<(HitList, ListingStats)> {
        check_interval(sp, ep, self.len())?;
        let mut marks = pool.take();
        let mut stats = ListingStats::default();
        let mut entries = Vec::new();
        let mut stack = vec![(sp, ep)];
        while let Some((i, j)) = stack.pop() {
            if i > j {
                continue;
            }
            stats.visited_intervals += 1;
            let p = self.rmq.query_unchecked(self.pred, i, j);
            let d = self.colors[p - 1];
            if !marks.mark(d) {
                continue;
            }
            entries.push(Hit::doc(d));
            match order {
                RecursionOrder::LeftFirst => {
                    stack.push((p + 1, j));
                    stack.push((i, p - 1));
                }
                RecursionOrder::RightFirst => {
                    stack.push((i, p - 1));
                    stack.push((p + 1, j));
                }
            }
        }
        stats.reset_ns = marks.reset();
        Ok((HitList::complete(entries), stats))
    }

    fn scan_cells(
        &self,
        from: usize,
        to: usize,
        marks: &mut Marks<'_>,
        out: &mut Vec<Hit>,
    ) -> usize {
        let mut fresh = 0;
        for &d in &self.colors[from - 1..to] {
            if marks.mark(d) {
                out.push(Hit::doc(d));
                fresh += 1;
            }
        }
        fresh
    }

    pub(crate) fn list_blocked(
        &self,
        sp: usize,
        ep: usize,
        order: BlockOrder,
        pool: &MarkPool,
    ) -> Result<(HitList, ListingStats)> {
        check_interval(sp, ep, self.len())?;
        let b = self.blocks.b;
        let mut marks = pool.take();
        let mut stats = ListingStats::default();
        let mut entries = Vec::new();

        // Blocks are 1-based; block k covers cells (k-1)b+1 ..= kb.
        let first_block = (sp - 1).div_ceil(b) + 1;
        let last_block = ep / b;
        if first_block > last_block {
            stats.tail_cells = ep - sp + 1;
            self.scan_cells(sp, ep, &mut marks, &mut entries);
            stats.reset_ns = marks.reset();
            return Ok((HitList::complete(entries), stats));
        }
        let left_tail_end = (first_block - 1) * b;
        let right_tail_start = last_block * b + 1;
        if sp <= left_tail_end {
            stats.tail_cells += left_tail_end - sp + 1;
            self.scan_cells(sp, left_tail_end, &mut marks, &mut entries);
        }

        enum Frame {
            Range(usize, usize),
            Block(usize),
        }
        let block_cells = |k: usize| ((k - 1) * b + 1, (k * b).min(self.len()));
        let mut stack = vec![Frame::Range(first_block, last_block)];
        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Range(i, j) => {
                    if i > j {
                        continue;
                    }
                    stats.visited_intervals += 1;
                    let k = self.blocks.rmq.query_unchecked(&self.blocks.minima, i, j);
                    let (from, to) = block_cells(k);
                    let unmarked = self.colors[from - 1..to]
                        .iter()
                        .any(|&d| !marks.is_marked(d));
                    if !unmarked {
                        stats.blocks_pruned += 1;
                        continue;
                    }
                    match order {
                        BlockOrder::LeftBlockRight => {
                            stack.push(Frame::Range(k + 1, j));
                            stack.push(Frame::Block(k));
                            stack.push(Frame::Range(i, k - 1));
                        }
                        BlockOrder::BlockLeftRight => {
                            stack.push(Frame::Range(k + 1, j));
                            stack.push(Frame::Range(i, k - 1));
                            stack.push(Frame::Block(k));
                        }
                    }
                }
                Frame::Block(k) => {
                    let (from, to) = block_cells(k);
                    stats.blocks_scanned += 1;
                    if self.scan_cells(from, to, &mut marks, &mut entries) == 0 {
                        stats.empty_block_scans += 1;
                    }
                }
            }
        }

        if right_tail_start <= ep {
            stats.tail_cells += ep - right_tail_start + 1;
            self.scan_cells(right_tail_start, ep, &mut marks, &mut entries);
        }
        stats.reset_ns = marks.reset();
        Ok((HitList::complete(entries), stats))
    }
}

/// Listing structures over an arbitrary color array.
#[derive(Debug)]
pub struct ColorIndex {
    colors: Vec<u32>,
    pred: Vec<u32>,
    rmq: RmqIndex,
    blocks: BlockMinima,
    pool: MarkPool,
}

impl ColorIndex {
    /// Builds over `colors` with values in `[1..num_colors]` and block
    /// factor `b`.
    pub fn new(colors: Vec<u32>, num_colors: u32, b: usize) -> Result<Self> {
        if colors.is_empty() {
            return Err(crate::Error::EmptyInput);
        }
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > num_colors) {
            return Err(crate::Error::Alphabet {
                symbol: c as u64,
                lo: 1,
                hi: num_colors as u64,
            });
        }
        let pred = predecessor_array(&colors, num_colors);
        let rmq = RmqIndex::build(&pred, RmqMode::Min)?;
        let blocks = BlockMinima::build(&pred, b)?;
        Ok(ColorIndex {
            colors,
            pred,
            rmq,
            blocks,
            pool: MarkPool::new(num_colors as usize, ResetStrategy::Auto),
        })
    }

    fn view(&self) -> Colors<'_> {
        Colors {
            colors: &self.colors,
            pred: &self.pred,
            rmq: &self.rmq,
            blocks: &self.blocks,
        }
    }

    pub fn predecessors(&self) -> &[u32] {
        &self.pred
    }

    pub fn block_minima(&self) -> &[u32] {
        &self.blocks.minima
    }

    pub fn list_rmq(&self, sp: usize, ep: usize) -> Result<(HitList, ListingStats)> {
        self.view().list_rmq(sp, ep)
    }

    pub fn list_marking(
        &self,
        sp: usize,
        ep: usize,
        order: RecursionOrder,
    ) -> Result<(HitList, ListingStats)> {
        self.view().list_marking(sp, ep, order, &self.pool)
    }

    pub fn list_blocked(
        &self,
        sp: usize,
        ep: usize,
        order: BlockOrder,
    ) -> Result<(HitList, ListingStats)> {
        self.view().list_blocked(sp, ep, order, &self.pool)
    }

    pub fn marks_clean(&self) -> bool {
        self.pool.all_clear()
    }
}

/// `L[i]`: previous position holding `colors[i]`, or 0.
pub fn predecessor_array(colors: &[u32], num_colors: u32) -> Vec<u32> {
    let mut last = vec![0u32; num_colors as usize + 1];
    colors
        .iter()
        .enumerate()
        .map(|(i, &c)| std::mem::replace(&mut last[c as usize], i as u32 + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counterexample() -> ColorIndex {
        ColorIndex::new(vec![2, 3, 3, 3, 2, 2, 2, 2, 2, 1, 1, 1], 3, 2).unwrap()
    }

    fn set(h: &HitList) -> Vec<u32> {
        let mut d = h.docs();
        d.sort_unstable();
        d
    }

    #[test]
    fn block_minima_of_counterexample() {
        let c = counterexample();
        assert_eq!(c.predecessors(), &[0, 0, 2, 3, 1, 5, 6, 7, 8, 0, 10, 11]);
        assert_eq!(c.block_minima(), &[0, 2, 1, 6, 0, 10]);
    }

    #[test]
    fn blocked_order_matters() {
        let c = counterexample();
        let (good, stats) = c.list_blocked(3, 12, BlockOrder::LeftBlockRight).unwrap();
        assert_eq!(set(&good), vec![1, 2, 3]);
        assert_eq!(stats.empty_block_scans, 0);
        let (bad, _) = c.list_blocked(3, 12, BlockOrder::BlockLeftRight).unwrap();
        assert_eq!(set(&bad), vec![1, 2]);
        assert!(c.marks_clean());
    }

    #[test]
    fn single_block_and_tails() {
        let c = counterexample();
        for (sp, ep) in [(1, 1), (2, 2), (4, 5), (2, 11), (1, 12)] {
            let (rmq, _) = c.list_rmq(sp, ep).unwrap();
            let (blk, _) = c.list_blocked(sp, ep, BlockOrder::LeftBlockRight).unwrap();
            assert_eq!(set(&rmq), set(&blk), "{sp}..{ep}");
        }
    }

    #[test]
    fn default_block_factor_values() {
        assert_eq!(default_block_factor(1), 4);
        assert_eq!(default_block_factor(16), 16);
        assert_eq!(default_block_factor(17), 25);
        assert_eq!(default_block_factor(1 << 20), 400);
    }
}
