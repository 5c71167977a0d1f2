//! Balanced wavelet tree over an integer array.
//!
//! A node handling symbols `[a..b]` sends `[a..m]` to its left child and
//! `[m+1..b]` to its right child, with `m = floor((a+b)/2)`. Each level is a
//! single bitvector holding the node bitmaps side by side in symbol order.
//! Elements whose node became a leaf above the last level keep flowing down
//! as 0 bits, so every level has exactly `n` bits and node boundaries are
//! recovered from ranks while descending: the left child of a node spanning
//! `[s, e)` spans `[s, s+z)` and the right child `[s+z, e)`, where `z` is the
//! number of 0s in the parent's span.
//!
//! The alphabet is any contiguous range `[lo..hi]`; document arrays use
//! `[1..D]` and predecessor arrays `[0..n]`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{Read, Write};
use std::ops::ControlFlow;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{check_interval, Error, Result};
use crate::succinct::{BitVector, SpaceUsage};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletTree {
    lo: u32,
    hi: u32,
    len: usize,
    levels: Vec<BitVector>,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    a: u32,
    b: u32,
    start: usize,
    end: usize,
}

impl Node {
    #[inline]
    fn is_leaf(&self) -> bool {
        self.a == self.b
    }

    #[inline]
    fn mid(&self) -> u32 {
        ((self.a as u64 + self.b as u64) / 2) as u32
    }
}

#[inline]
fn height_for(lo: u32, hi: u32) -> usize {
    let sigma = (hi - lo) as u64 + 1;
    (u64::BITS - (sigma - 1).leading_zeros()) as usize
}

impl WaveletTree {
    /// Builds over `data` with symbols in `[1..alphabet]`.
    pub fn build(data: &[u32], alphabet: u32) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::Config("alphabet size must be at least 1".into()));
        }
        Self::build_range(data, 1, alphabet)
    }

    /// Builds over `data` with symbols in `[lo..hi]`.
    pub fn build_range(data: &[u32], lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Config(format!("empty alphabet [{lo}..{hi}]")));
        }
        if let Some(&bad) = data.iter().find(|&&c| c < lo || c > hi) {
            return Err(Error::Alphabet {
                symbol: bad as u64,
                lo: lo as u64,
                hi: hi as u64,
            });
        }
        let n = data.len();
        let height = height_for(lo, hi);
        let mut levels = Vec::with_capacity(height);
        let mut cur = data.to_vec();
        let mut next = vec![0u32; n];
        let mut right = Vec::new();
        for level in 0..height {
            let mut words = vec![0u64; n.div_ceil(64)];
            let mut p = 0;
            while p < n {
                let (a, b) = node_of(lo, hi, level, cur[p]);
                let seg_start = p;
                while p < n && cur[p] >= a && cur[p] <= b {
                    p += 1;
                }
                let seg = &cur[seg_start..p];
                if a == b {
                    next[seg_start..p].copy_from_slice(seg);
                    continue;
                }
                let m = ((a as u64 + b as u64) / 2) as u32;
                right.clear();
                let mut w = seg_start;
                for (off, &c) in seg.iter().enumerate() {
                    if c > m {
                        let q = seg_start + off;
                        words[q / 64] |= 1u64 << (q % 64);
                        right.push(c);
                    } else {
                        next[w] = c;
                        w += 1;
                    }
                }
                next[w..p].copy_from_slice(&right);
            }
            levels.push(BitVector::from_words(words, n));
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(WaveletTree {
            lo,
            hi,
            len: n,
            levels,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Smallest and largest representable symbol.
    pub fn alphabet(&self) -> (u32, u32) {
        (self.lo, self.hi)
    }

    /// Bitmap of the given level (all nodes of that level concatenated).
    pub fn level_bits(&self, level: usize) -> &BitVector {
        &self.levels[level]
    }

    fn root(&self) -> Node {
        Node {
            a: self.lo,
            b: self.hi,
            start: 0,
            end: self.len,
        }
    }

    /// Children of an internal node; also returns `rank0(node.start)` for
    /// callers that remap positions.
    #[inline]
    fn children(&self, level: usize, node: &Node) -> (Node, Node, usize) {
        let bv = &self.levels[level];
        let r0s = bv.rank0(node.start);
        let z = bv.rank0(node.end) - r0s;
        let m = node.mid();
        let left = Node {
            a: node.a,
            b: m,
            start: node.start,
            end: node.start + z,
        };
        let right = Node {
            a: m + 1,
            b: node.b,
            start: node.start + z,
            end: node.end,
        };
        (left, right, r0s)
    }

    /// Maps the level position `p` (0-based, inside `node`, or `node.end`) to
    /// the child level.
    #[inline]
    fn map_left(&self, level: usize, node: &Node, r0s: usize, p: usize) -> usize {
        node.start + self.levels[level].rank0(p) - r0s
    }

    #[inline]
    fn map_right(&self, level: usize, node: &Node, r0s: usize, right: &Node, p: usize) -> usize {
        let r1p = p - self.levels[level].rank0(p);
        let r1s = node.start - r0s;
        right.start + r1p - r1s
    }

    fn check_symbol(&self, d: u32) -> Result<()> {
        if d < self.lo || d > self.hi {
            Err(Error::Alphabet {
                symbol: d as u64,
                lo: self.lo as u64,
                hi: self.hi as u64,
            })
        } else {
            Ok(())
        }
    }

    /// Symbol at 1-based position `i`.
    pub fn access(&self, i: usize) -> Result<u32> {
        if i == 0 || i > self.len {
            return Err(Error::range("position", i, 1, self.len));
        }
        Ok(self.access_unchecked(i))
    }

    pub(crate) fn access_unchecked(&self, i: usize) -> u32 {
        let mut node = self.root();
        let mut p = i - 1;
        for level in 0..self.levels.len() {
            if node.is_leaf() {
                break;
            }
            let (left, right, r0s) = self.children(level, &node);
            if self.levels[level].bit(p) {
                p = self.map_right(level, &node, r0s, &right, p);
                node = right;
            } else {
                p = self.map_left(level, &node, r0s, p);
                node = left;
            }
        }
        node.a
    }

    /// Occurrences of `d` in positions `1..=i`.
    pub fn rank(&self, d: u32, i: usize) -> Result<usize> {
        self.check_symbol(d)?;
        if i > self.len {
            return Err(Error::range("position", i, 0, self.len));
        }
        Ok(self.rank_unchecked(d, i))
    }

    pub(crate) fn rank_unchecked(&self, d: u32, i: usize) -> usize {
        let mut node = self.root();
        let mut p = i; // prefix end, half-open, in level coordinates
        for level in 0..self.levels.len() {
            if node.is_leaf() {
                break;
            }
            let (left, right, r0s) = self.children(level, &node);
            if d <= node.mid() {
                p = self.map_left(level, &node, r0s, p);
                node = left;
            } else {
                p = self.map_right(level, &node, r0s, &right, p);
                node = right;
            }
        }
        p - node.start
    }

    /// 1-based position of the `j`-th occurrence of `d`; `select(d, 0) = 0`.
    pub fn select(&self, d: u32, j: usize) -> Result<usize> {
        self.check_symbol(d)?;
        if j == 0 {
            return Ok(0);
        }
        let mut path = Vec::with_capacity(self.levels.len());
        let mut node = self.root();
        for level in 0..self.levels.len() {
            if node.is_leaf() {
                break;
            }
            let (left, right, _) = self.children(level, &node);
            let go_left = d <= node.mid();
            path.push((node.start, go_left));
            node = if go_left { left } else { right };
        }
        let count = node.end - node.start;
        if j > count {
            return Err(Error::range("occurrence", j, 0, count));
        }
        let mut offset = j - 1;
        for (level, &(start, went_left)) in path.iter().enumerate().rev() {
            let bv = &self.levels[level];
            let global = if went_left {
                bv.select0(bv.rank0(start) + offset + 1)
            } else {
                bv.select1(bv.rank1(start) + offset + 1)
            };
            offset = global - 1 - start;
        }
        Ok(offset + 1)
    }

    /// Position of the previous occurrence of the symbol at `i`, or 0.
    pub fn sim_pred(&self, i: usize) -> Result<usize> {
        let d = self.access(i)?;
        let r = self.rank_unchecked(d, i);
        if r <= 1 {
            Ok(0)
        } else {
            self.select(d, r - 1)
        }
    }

    /// The `q`-th smallest symbol in `[sp, ep]` and its frequency there.
    pub fn quantile(&self, sp: usize, ep: usize, q: usize) -> Result<(u32, usize)> {
        check_interval(sp, ep, self.len)?;
        if q == 0 || q > ep - sp + 1 {
            return Err(Error::range("quantile rank", q, 1, ep - sp + 1));
        }
        let mut node = self.root();
        let (mut l, mut r) = (sp - 1, ep);
        let mut q = q;
        for level in 0..self.levels.len() {
            if node.is_leaf() {
                break;
            }
            let (left, right, r0s) = self.children(level, &node);
            let bv = &self.levels[level];
            let (r0l, r0r) = (bv.rank0(l), bv.rank0(r));
            let z = r0r - r0l;
            if q <= z {
                l = node.start + r0l - r0s;
                r = node.start + r0r - r0s;
                node = left;
            } else {
                let r1s = node.start - r0s;
                l = right.start + (l - r0l) - r1s;
                r = right.start + (r - r0r) - r1s;
                q -= z;
                node = right;
            }
        }
        Ok((node.a, r - l))
    }

    /// Number of positions in `[sp, ep]` holding a symbol `< x`.
    pub fn count_less(&self, sp: usize, ep: usize, x: u64) -> Result<usize> {
        check_interval(sp, ep, self.len)?;
        Ok(self.count_less_unchecked(sp, ep, x))
    }

    pub(crate) fn count_less_unchecked(&self, sp: usize, ep: usize, x: u64) -> usize {
        if x <= self.lo as u64 {
            return 0;
        }
        if x > self.hi as u64 {
            return ep - sp + 1;
        }
        // Count symbols <= t, with lo <= t < hi.
        let t = (x - 1) as u32;
        let mut node = self.root();
        let (mut l, mut r) = (sp - 1, ep);
        let mut acc = 0;
        for level in 0..self.levels.len() {
            if node.b <= t {
                return acc + (r - l);
            }
            if node.a > t || l == r {
                return acc;
            }
            let (left, right, r0s) = self.children(level, &node);
            let bv = &self.levels[level];
            let (r0l, r0r) = (bv.rank0(l), bv.rank0(r));
            if t >= node.mid() {
                acc += r0r - r0l;
                let r1s = node.start - r0s;
                l = right.start + (l - r0l) - r1s;
                r = right.start + (r - r0r) - r1s;
                node = right;
            } else {
                l = node.start + r0l - r0s;
                r = node.start + r0r - r0s;
                node = left;
            }
        }
        if node.b <= t {
            acc + (r - l)
        } else {
            acc
        }
    }

    /// Visits the distinct symbols of `[sp, ep]` in increasing order with
    /// their frequencies, until `f` breaks.
    pub fn for_each_distinct<F>(&self, sp: usize, ep: usize, mut f: F) -> Result<()>
    where
        F: FnMut(u32, usize) -> ControlFlow<()>,
    {
        check_interval(sp, ep, self.len)?;
        let _ = self.dfs(0, self.root(), sp - 1, ep, &mut f);
        Ok(())
    }

    fn dfs<F>(&self, level: usize, node: Node, l: usize, r: usize, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(u32, usize) -> ControlFlow<()>,
    {
        if l == r {
            return ControlFlow::Continue(());
        }
        if node.is_leaf() {
            return f(node.a, r - l);
        }
        let (left, right, r0s) = self.children(level, &node);
        let bv = &self.levels[level];
        let (r0l, r0r) = (bv.rank0(l), bv.rank0(r));
        let r1s = node.start - r0s;
        self.dfs(
            level + 1,
            left,
            node.start + r0l - r0s,
            node.start + r0r - r0s,
            f,
        )?;
        self.dfs(
            level + 1,
            right,
            right.start + (l - r0l) - r1s,
            right.start + (r - r0r) - r1s,
            f,
        )
    }

    /// All distinct symbols of `[sp, ep]` with frequencies, by symbol.
    pub fn distinct(&self, sp: usize, ep: usize) -> Result<Vec<(u32, usize)>> {
        let mut out = Vec::new();
        self.for_each_distinct(sp, ep, |d, f| {
            out.push((d, f));
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// The `k` smallest distinct symbols of `[sp, ep]` with frequencies.
    pub fn k_smallest_distinct(&self, sp: usize, ep: usize, k: usize) -> Result<Vec<(u32, usize)>> {
        check_interval(sp, ep, self.len)?;
        let mut out = Vec::with_capacity(k.min(ep - sp + 1));
        if k == 0 {
            return Ok(out);
        }
        self.for_each_distinct(sp, ep, |d, f| {
            out.push((d, f));
            if out.len() == k {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(out)
    }

    /// Symbols of `[sp, ep]` by decreasing frequency (ties by smaller
    /// symbol), produced lazily by a best-first traversal.
    pub fn top_frequent(&self, sp: usize, ep: usize) -> Result<TopFrequent<'_>> {
        check_interval(sp, ep, self.len)?;
        let mut heap = BinaryHeap::new();
        heap.push(Pending {
            weight: ep - sp + 1,
            first: Reverse(self.lo),
            level: 0,
            node: self.root(),
            l: sp - 1,
            r: ep,
        });
        Ok(TopFrequent { tree: self, heap })
    }

    /// The `k` most frequent symbols of `[sp, ep]`.
    pub fn topk_frequent(&self, sp: usize, ep: usize, k: usize) -> Result<Vec<(u32, usize)>> {
        Ok(self.top_frequent(sp, ep)?.take(k).collect())
    }

    pub(crate) fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_u32::<LittleEndian>(self.lo)?;
        w.write_u32::<LittleEndian>(self.hi)?;
        w.write_u64::<LittleEndian>(self.len as u64)?;
        w.write_u64::<LittleEndian>(self.levels.len() as u64)?;
        for level in &self.levels {
            level.write_to(w)?;
        }
        Ok(())
    }

    pub(crate) fn read_from<R: Read>(r: &mut R, limit: usize) -> Result<Self> {
        let lo = r.read_u32::<LittleEndian>()?;
        let hi = r.read_u32::<LittleEndian>()?;
        let len = r.read_u64::<LittleEndian>()? as usize;
        let n_levels = r.read_u64::<LittleEndian>()? as usize;
        if lo > hi || n_levels != height_for(lo, hi) {
            return Err(Error::Format("wavelet tree header".into()));
        }
        let mut levels = Vec::with_capacity(n_levels);
        for _ in 0..n_levels {
            let bv = BitVector::read_from(r, limit)?;
            if bv.len() != len {
                return Err(Error::Format("wavelet level length".into()));
            }
            levels.push(bv);
        }
        Ok(WaveletTree {
            lo,
            hi,
            len,
            levels,
        })
    }
}

/// Node range handling symbol `c` at depth `level` (or the leaf above it).
fn node_of(lo: u32, hi: u32, level: usize, c: u32) -> (u32, u32) {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..level {
        if a == b {
            break;
        }
        let m = ((a as u64 + b as u64) / 2) as u32;
        if c <= m {
            b = m;
        } else {
            a = m + 1;
        }
    }
    (a, b)
}

#[derive(Debug)]
struct Pending {
    weight: usize,
    first: Reverse<u32>,
    level: usize,
    node: Node,
    l: usize,
    r: usize,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight && self.first == other.first
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.weight, self.first).cmp(&(other.weight, other.first))
    }
}

/// Iterator returned by [`WaveletTree::top_frequent`].
///
/// A node's span length bounds the frequency of every leaf below it, so the
/// first leaves popped from the max-heap are exactly the most frequent
/// symbols. Nodes pending in the heap cover disjoint symbol ranges, so
/// ordering equal weights by smaller first symbol yields ties by symbol.
pub struct TopFrequent<'a> {
    tree: &'a WaveletTree,
    heap: BinaryHeap<Pending>,
}

impl Iterator for TopFrequent<'_> {
    type Item = (u32, usize);

    fn next(&mut self) -> Option<(u32, usize)> {
        let t = self.tree;
        while let Some(p) = self.heap.pop() {
            if p.node.is_leaf() {
                return Some((p.node.a, p.weight));
            }
            let (left, right, r0s) = t.children(p.level, &p.node);
            let bv = &t.levels[p.level];
            let (r0l, r0r) = (bv.rank0(p.l), bv.rank0(p.r));
            let r1s = p.node.start - r0s;
            let (ll, lr) = (p.node.start + r0l - r0s, p.node.start + r0r - r0s);
            let (rl, rr) = (
                right.start + (p.l - r0l) - r1s,
                right.start + (p.r - r0r) - r1s,
            );
            for (node, l, r) in [(left, ll, lr), (right, rl, rr)] {
                if l < r {
                    self.heap.push(Pending {
                        weight: r - l,
                        first: Reverse(node.a),
                        level: p.level + 1,
                        node,
                        l,
                        r,
                    });
                }
            }
        }
        None
    }
}

impl SpaceUsage for WaveletTree {
    fn size_in_bits(&self) -> usize {
        self.levels.iter().map(|l| l.size_in_bits()).sum::<usize>() + 3 * 64
    }
}
