//! Range minimum/maximum queries with leftmost tie-breaking.
//!
//! The base array is cut into blocks of `max(1, ceil(lg n / 2))` cells. A
//! sparse table stores, for every block `j` and level `k`, the best position in
//! blocks `j .. j + 2^k`. A query combines two overlapping table entries for
//! the full blocks it covers with a linear scan of the partial blocks at both
//! ends. The index does not own the base array; callers pass the same slice
//! to every query.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::SpaceUsage;
use crate::codec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmqMode {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmqIndex {
    mode: RmqMode,
    len: usize,
    block_size: usize,
    /// `table[k][j]`: 0-based position of the extremum of blocks `j..j+2^k`.
    /// Level 0 holds the per-block extrema.
    table: Vec<Vec<u32>>,
}

impl RmqIndex {
    pub fn build<T: Ord + Copy>(base: &[T], mode: RmqMode) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::EmptyInput);
        }
        if base.len() > u32::MAX as usize {
            return Err(Error::Config("array too long for 32-bit positions".into()));
        }
        let n = base.len();
        let lg = usize::BITS - (n - 1).leading_zeros();
        let block_size = (lg as usize).div_ceil(2).max(1);
        let n_blocks = n.div_ceil(block_size);

        let mut idx = RmqIndex {
            mode,
            len: n,
            block_size,
            table: Vec::new(),
        };
        let level0: Vec<u32> = (0..n_blocks)
            .map(|j| {
                let lo = j * block_size;
                let hi = (lo + block_size).min(n);
                idx.scan(base, lo, hi) as u32
            })
            .collect();
        idx.table.push(level0);
        let mut k = 1;
        while (1usize << k) <= n_blocks {
            let prev = &idx.table[k - 1];
            let half = 1usize << (k - 1);
            let level: Vec<u32> = (0..=n_blocks - (1 << k))
                .map(|j| idx.pick(base, prev[j] as usize, prev[j + half] as usize) as u32)
                .collect();
            idx.table.push(level);
            k += 1;
        }
        Ok(idx)
    }

    pub fn mode(&self) -> RmqMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// Of two 0-based positions, the one holding the extremum; on ties the
    /// smaller position.
    #[inline]
    fn pick<T: Ord + Copy>(&self, base: &[T], a: usize, b: usize) -> usize {
        let (l, r) = if a <= b { (a, b) } else { (b, a) };
        let better = match self.mode {
            RmqMode::Min => base[r] < base[l],
            RmqMode::Max => base[r] > base[l],
        };
        if better {
            r
        } else {
            l
        }
    }

    #[inline]
    fn scan<T: Ord + Copy>(&self, base: &[T], lo: usize, hi: usize) -> usize {
        let mut best = lo;
        for p in lo + 1..hi {
            let better = match self.mode {
                RmqMode::Min => base[p] < base[best],
                RmqMode::Max => base[p] > base[best],
            };
            if better {
                best = p;
            }
        }
        best
    }

    /// Checked query over the 1-based closed interval `[sp, ep]`.
    pub fn query<T: Ord + Copy>(&self, base: &[T], sp: usize, ep: usize) -> Result<usize> {
        if base.len() != self.len {
            return Err(Error::Config(format!(
                "rmq built over {} cells, queried with {}",
                self.len,
                base.len()
            )));
        }
        crate::error::check_interval(sp, ep, self.len)?;
        Ok(self.query_unchecked(base, sp, ep))
    }

    /// Leftmost extremum position in `[sp, ep]` (1-based, inclusive).
    #[inline]
    pub fn query_unchecked<T: Ord + Copy>(&self, base: &[T], sp: usize, ep: usize) -> usize {
        debug_assert!(sp >= 1 && sp <= ep && ep <= self.len);
        let (l, r) = (sp - 1, ep); // half-open
        let bs = self.block_size;
        let first_full = l.div_ceil(bs);
        let last_full = r / bs; // exclusive
        if first_full >= last_full {
            return self.scan(base, l, r) + 1;
        }
        let mut best = self.range_blocks(base, first_full, last_full);
        if l < first_full * bs {
            best = self.pick(base, self.scan(base, l, first_full * bs), best);
        }
        if last_full * bs < r {
            best = self.pick(base, best, self.scan(base, last_full * bs, r));
        }
        best + 1
    }

    #[inline]
    fn range_blocks<T: Ord + Copy>(&self, base: &[T], from: usize, to: usize) -> usize {
        let span = to - from;
        let k = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let a = self.table[k][from] as usize;
        let b = self.table[k][to - (1 << k)] as usize;
        self.pick(base, a, b)
    }

    pub(crate) fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_u8(match self.mode {
            RmqMode::Min => 0,
            RmqMode::Max => 1,
        })?;
        w.write_u64::<LittleEndian>(self.len as u64)?;
        w.write_u64::<LittleEndian>(self.block_size as u64)?;
        w.write_u64::<LittleEndian>(self.table.len() as u64)?;
        for level in &self.table {
            codec::write_u32s(w, level)?;
        }
        Ok(())
    }

    pub(crate) fn read_from<R: Read>(r: &mut R, limit: usize) -> Result<Self> {
        let mode = match r.read_u8()? {
            0 => RmqMode::Min,
            1 => RmqMode::Max,
            m => return Err(Error::Format(format!("rmq mode {m}"))),
        };
        let len = r.read_u64::<LittleEndian>()? as usize;
        let block_size = r.read_u64::<LittleEndian>()? as usize;
        let levels = r.read_u64::<LittleEndian>()? as usize;
        if block_size == 0 || levels > 64 || len == 0 {
            return Err(Error::Format("rmq header".into()));
        }
        let n_blocks = len.div_ceil(block_size);
        let mut table = Vec::with_capacity(levels);
        for k in 0..levels {
            let level = codec::read_u32s(r, limit)?;
            if n_blocks < (1 << k) || level.len() != n_blocks + 1 - (1 << k) {
                return Err(Error::Format("rmq table level size".into()));
            }
            if level.iter().any(|&p| p as usize >= len) {
                return Err(Error::Format("rmq position out of range".into()));
            }
            table.push(level);
        }
        Ok(RmqIndex {
            mode,
            len,
            block_size,
            table,
        })
    }
}

impl SpaceUsage for RmqIndex {
    fn size_in_bits(&self) -> usize {
        self.table.iter().map(|l| l.len() * 32).sum::<usize>() + 3 * 64
    }
}
