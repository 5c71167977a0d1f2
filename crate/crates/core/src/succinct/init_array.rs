//! Array with constant-time bulk initialization.
//!
//! Which cells hold a written value is tracked by a bitmap packed into
//! machine words. The bitmap words themselves are lazily initialized with the
//! classic shadow/stack trick: backing word `q` is live iff
//! `1 <= shadow[q] <= top && stack[shadow[q]] == q`. Resetting the whole array
//! is therefore `top = 0`, independent of its size, and the overhead beyond
//! the values is the bitmap plus two word arrays over the bitmap, about `3D`
//! bits.

use super::SpaceUsage;
use crate::error::{Error, Result};

const W: usize = u64::BITS as usize;

#[derive(Debug, Clone, Default)]
pub struct InitializableArray {
    len: usize,
    fill: u64,
    values: Vec<u64>,
    backing: Vec<u64>,
    shadow: Vec<u64>,
    // 1-based, stack[0] unused.
    stack: Vec<u64>,
    top: usize,
}

impl InitializableArray {
    pub fn new(len: usize, fill: u64) -> Self {
        let mut a = InitializableArray::default();
        a.init(len, fill);
        a
    }

    /// Logically sets every cell to `fill`. Constant time unless `len`
    /// exceeds the capacity allocated so far.
    pub fn init(&mut self, len: usize, fill: u64) {
        if len > self.values.len() {
            let words = len.div_ceil(W);
            self.values.resize(len, 0);
            self.backing.resize(words, 0);
            self.shadow.resize(words, 0);
            self.stack.resize(words + 1, 0);
        }
        self.len = len;
        self.fill = fill;
        self.top = 0;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn fill_value(&self) -> u64 {
        self.fill
    }

    /// Number of backing words initialized since the last `init`.
    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    fn word_live(&self, q: usize) -> bool {
        let u = self.shadow[q];
        u >= 1 && (u as usize) <= self.top && self.stack[u as usize] == q as u64
    }

    #[inline]
    fn is_written(&self, i0: usize) -> bool {
        let q = i0 / W;
        self.word_live(q) && (self.backing[q] >> (i0 % W)) & 1 == 1
    }

    fn check(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len {
            Err(Error::range("array index", i, 1, self.len))
        } else {
            Ok(i - 1)
        }
    }

    /// Value at 1-based index `i`.
    pub fn read(&self, i: usize) -> Result<u64> {
        let i0 = self.check(i)?;
        Ok(self.get(i0))
    }

    pub fn write(&mut self, i: usize, v: u64) -> Result<()> {
        let i0 = self.check(i)?;
        self.set(i0, v);
        Ok(())
    }

    /// 0-based unchecked read used on hot paths.
    #[inline]
    pub(crate) fn get(&self, i0: usize) -> u64 {
        if self.is_written(i0) {
            self.values[i0]
        } else {
            self.fill
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, i0: usize, v: u64) {
        debug_assert!(i0 < self.len);
        let q = i0 / W;
        if !self.word_live(q) {
            self.top += 1;
            self.shadow[q] = self.top as u64;
            self.stack[self.top] = q as u64;
            self.backing[q] = 0;
        }
        self.backing[q] |= 1u64 << (i0 % W);
        self.values[i0] = v;
    }

    /// Overwrites all internal storage with arbitrary words, as if the memory
    /// had been handed out uninitialized. Logical contents are unspecified
    /// until the next `init`.
    #[doc(hidden)]
    pub fn scribble(&mut self, mut next_word: impl FnMut() -> u64) {
        for x in self
            .values
            .iter_mut()
            .chain(self.backing.iter_mut())
            .chain(self.shadow.iter_mut())
            .chain(self.stack.iter_mut())
        {
            *x = next_word();
        }
        // Keep `top` in range; the invariant only requires 0 <= top <= words.
        self.top = (next_word() as usize) % (self.backing.len() + 1);
    }

    /// Bits used beyond the values array.
    pub fn overhead_bits(&self) -> usize {
        (self.backing.len() + self.shadow.len() + self.stack.len()) * W + 3 * W
    }
}

impl SpaceUsage for InitializableArray {
    fn size_in_bits(&self) -> usize {
        self.values.len() * W + self.overhead_bits()
    }
}
