//! Immutable bitvector with a two-level rank directory.
//!
//! Superblocks cover 512 bits and store absolute counts; each 64-bit word
//! stores a 16-bit count relative to its superblock. Rank is a lookup plus one
//! popcount. Select binary-searches the superblock counts, narrowed by a
//! sampled hint every [`SELECT_SAMPLE`] occurrences, then scans at most eight
//! words.

use std::io::{Read, Write};

use super::SpaceUsage;
use crate::codec;
use crate::error::{Error, Result};

const WORD_BITS: usize = 64;
const WORDS_PER_SUPERBLOCK: usize = 8;
const SUPERBLOCK_BITS: usize = WORD_BITS * WORDS_PER_SUPERBLOCK;
const SELECT_SAMPLE: usize = 8192;

#[derive(Clone, PartialEq, Eq)]
pub struct BitVector {
    len: usize,
    ones: usize,
    words: Vec<u64>,
    superblocks: Vec<u64>,
    blocks: Vec<u16>,
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVector(len={}, ones={}, ", self.len, self.ones)?;
        for i in 0..self.len.min(128) {
            write!(f, "{}", self.bit(i) as u8)?;
        }
        if self.len > 128 {
            write!(f, "...")?;
        }
        write!(f, ")")
    }
}

impl BitVector {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len.is_multiple_of(WORD_BITS) {
                words.push(0u64);
            }
            if b {
                *words.last_mut().unwrap() |= 1u64 << (len % WORD_BITS);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    /// Builds a vector of `len` bits with 1s at the given 1-based positions.
    pub fn from_positions(len: usize, ones: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut words = vec![0u64; len.div_ceil(WORD_BITS)];
        for p in ones {
            if p == 0 || p > len {
                return Err(Error::range("bit position", p, 1, len));
            }
            words[(p - 1) / WORD_BITS] |= 1u64 << ((p - 1) % WORD_BITS);
        }
        Ok(Self::from_words(words, len))
    }

    /// Takes ownership of raw words; bits beyond `len` are cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(WORD_BITS), 0);
        if !len.is_multiple_of(WORD_BITS) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % WORD_BITS)) - 1;
        }

        let n_super = words.len().div_ceil(WORDS_PER_SUPERBLOCK);
        let mut superblocks = Vec::with_capacity(n_super + 1);
        let mut blocks = Vec::with_capacity(words.len());
        let mut total = 0u64;
        for (w, &word) in words.iter().enumerate() {
            if w % WORDS_PER_SUPERBLOCK == 0 {
                superblocks.push(total);
            }
            blocks.push((total - superblocks[w / WORDS_PER_SUPERBLOCK]) as u16);
            total += word.count_ones() as u64;
        }
        superblocks.push(total);

        let mut bv = BitVector {
            len,
            ones: total as usize,
            words,
            superblocks,
            blocks,
            select1_hints: Vec::new(),
            select0_hints: Vec::new(),
        };
        bv.select1_hints = bv.sample_hints(true);
        bv.select0_hints = bv.sample_hints(false);
        bv
    }

    fn ones_before_superblock(&self, sb: usize, bit: bool) -> usize {
        let ones = self.superblocks[sb] as usize;
        if bit {
            ones
        } else {
            (sb * SUPERBLOCK_BITS).min(self.len) - ones
        }
    }

    fn sample_hints(&self, bit: bool) -> Vec<u32> {
        let total = self.count(bit);
        let mut hints = Vec::with_capacity(total / SELECT_SAMPLE + 1);
        let n_super = self.superblocks.len() - 1;
        let mut sb = 0;
        let mut target = 1;
        while target <= total {
            while sb + 1 < n_super && self.ones_before_superblock(sb + 1, bit) < target {
                sb += 1;
            }
            hints.push(sb as u32);
            target += SELECT_SAMPLE;
        }
        hints
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    fn count(&self, bit: bool) -> usize {
        if bit {
            self.ones
        } else {
            self.count_zeros()
        }
    }

    /// 0-based bit access.
    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Bit at 1-based position `i`.
    pub fn access(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.len {
            return Err(Error::range("bit position", i, 1, self.len));
        }
        Ok(self.bit(i - 1))
    }

    /// Number of 1s among the first `i` bits. Requires `i <= len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        if i == self.len {
            return self.ones;
        }
        let w = i / WORD_BITS;
        let base = self.superblocks[w / WORDS_PER_SUPERBLOCK] as usize + self.blocks[w] as usize;
        let mask = (1u64 << (i % WORD_BITS)) - 1;
        base + (self.words[w] & mask).count_ones() as usize
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Checked rank: occurrences of `bit` among positions `1..=i`.
    pub fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::range("rank position", i, 0, self.len));
        }
        Ok(if bit { self.rank1(i) } else { self.rank0(i) })
    }

    /// Checked select: 1-based position of the `j`-th occurrence of `bit`,
    /// with `select(bit, 0) = 0`.
    pub fn select(&self, bit: bool, j: usize) -> Result<usize> {
        let total = self.count(bit);
        if j > total {
            return Err(Error::range("select rank", j, 0, total));
        }
        Ok(self.select_unchecked(bit, j))
    }

    #[inline]
    pub fn select1(&self, j: usize) -> usize {
        self.select_unchecked(true, j)
    }

    #[inline]
    pub fn select0(&self, j: usize) -> usize {
        self.select_unchecked(false, j)
    }

    fn select_unchecked(&self, bit: bool, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        debug_assert!(j <= self.count(bit));
        let hints = if bit {
            &self.select1_hints
        } else {
            &self.select0_hints
        };
        let h = (j - 1) / SELECT_SAMPLE;
        let n_super = self.superblocks.len() - 1;
        // Last superblock whose prefix count is < j, searched in [lo, hi].
        let mut lo = hints[h] as usize;
        let mut hi = hints.get(h + 1).map_or(n_super - 1, |&x| x as usize);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.ones_before_superblock(mid, bit) < j {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sb = lo;
        let sb_before = self.ones_before_superblock(sb, bit);
        let first = sb * WORDS_PER_SUPERBLOCK;
        let last = (first + WORDS_PER_SUPERBLOCK).min(self.words.len());
        let mut w = first;
        let mut before = sb_before;
        for cand in first + 1..last {
            let ones_rel = self.blocks[cand] as usize;
            let cnt = if bit {
                self.superblocks[sb] as usize + ones_rel
            } else {
                cand * WORD_BITS - self.superblocks[sb] as usize - ones_rel
            };
            if cnt < j {
                w = cand;
                before = cnt;
            } else {
                break;
            }
        }
        let word = if bit { self.words[w] } else { !self.words[w] };
        w * WORD_BITS + select_in_word(word, j - before) + 1
    }

    pub(crate) fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        codec::write_u64s(w, &[self.len as u64])?;
        codec::write_u64s(w, &self.words)?;
        codec::write_u64s(w, &self.superblocks)?;
        codec::write_u16s(w, &self.blocks)?;
        codec::write_u32s(w, &self.select1_hints)?;
        codec::write_u32s(w, &self.select0_hints)?;
        Ok(())
    }

    pub(crate) fn read_from<R: Read>(r: &mut R, limit: usize) -> Result<Self> {
        let len = codec::read_u64s(r, limit)?;
        let [len] = len[..] else {
            return Err(Error::Format("bitvector header".into()));
        };
        let len = len as usize;
        let words = codec::read_u64s(r, limit)?;
        let superblocks = codec::read_u64s(r, limit)?;
        let blocks = codec::read_u16s(r, limit)?;
        let select1_hints = codec::read_u32s(r, limit)?;
        let select0_hints = codec::read_u32s(r, limit)?;
        if words.len() != len.div_ceil(WORD_BITS)
            || blocks.len() != words.len()
            || superblocks.len() != words.len().div_ceil(WORDS_PER_SUPERBLOCK) + 1
        {
            return Err(Error::Format("bitvector directory sizes".into()));
        }
        let ones = *superblocks.last().unwrap() as usize;
        if ones > len {
            return Err(Error::Format("bitvector popcount".into()));
        }
        Ok(BitVector {
            len,
            ones,
            words,
            superblocks,
            blocks,
            select1_hints,
            select0_hints,
        })
    }
}

/// 0-based index of the `r`-th (1-based) set bit of `word`.
#[inline]
fn select_in_word(mut word: u64, r: usize) -> usize {
    debug_assert!(r >= 1 && r <= word.count_ones() as usize);
    for _ in 1..r {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

impl SpaceUsage for BitVector {
    fn size_in_bits(&self) -> usize {
        self.words.len() * 64
            + self.superblocks.len() * 64
            + self.blocks.len() * 16
            + (self.select1_hints.len() + self.select0_hints.len()) * 32
    }
}
