//! Pooled scratch arrays indexed by document.

use std::sync::Mutex;
use std::time::Instant;

use crate::succinct::InitializableArray;

/// How a scratch array is returned to the all-unmarked state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResetStrategy {
    /// Unmark recorded documents, or re-initialize when more than
    /// `D / lg D` were touched.
    #[default]
    Auto,
    Unmark,
    Reinit,
}

/// Hands out scratch arrays of length `D` with fill value 0. Each borrowed
/// array is exclusive to its holder and comes back clean.
#[derive(Debug)]
pub(crate) struct MarkPool {
    len: usize,
    strategy: ResetStrategy,
    free: Mutex<Vec<InitializableArray>>,
}

impl MarkPool {
    pub(crate) fn new(len: usize, strategy: ResetStrategy) -> Self {
        MarkPool {
            len,
            strategy,
            free: Mutex::new(Vec::new()),
        }
    }

    pub(crate) fn take(&self) -> Marks<'_> {
        let arr = self
            .free
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .pop()
            .unwrap_or_else(|| InitializableArray::new(self.len, 0));
        Marks {
            pool: self,
            arr: Some(arr),
            touched: Vec::new(),
            reset_ns: 0,
        }
    }

    /// True if every pooled array reads 0 everywhere.
    pub(crate) fn all_clear(&self) -> bool {
        let free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        free.iter().all(|a| (0..a.len()).all(|i| a.get(i) == 0))
    }

    #[cfg(test)]
    pub(crate) fn pooled(&self) -> usize {
        self.free.lock().unwrap_or_else(|e| e.into_inner()).len()
    }
}

/// A borrowed scratch array. Values are per document (1-based); 0 means
/// unmarked.
pub(crate) struct Marks<'a> {
    pool: &'a MarkPool,
    arr: Option<InitializableArray>,
    touched: Vec<u32>,
    reset_ns: u64,
}

impl Marks<'_> {
    #[inline]
    pub(crate) fn get(&self, d: u32) -> u64 {
        self.arr.as_ref().map_or(0, |a| a.get(d as usize - 1))
    }

    #[inline]
    pub(crate) fn is_marked(&self, d: u32) -> bool {
        self.get(d) != 0
    }

    /// Stores a nonzero value for `d`.
    #[inline]
    pub(crate) fn set(&mut self, d: u32, v: u64) {
        debug_assert!(v != 0);
        let a = self.arr.as_mut().expect("live scratch");
        if a.get(d as usize - 1) == 0 {
            self.touched.push(d);
        }
        a.set(d as usize - 1, v);
    }

    /// Marks `d`, returning whether it was unmarked.
    #[inline]
    pub(crate) fn mark(&mut self, d: u32) -> bool {
        if self.is_marked(d) {
            false
        } else {
            self.set(d, 1);
            true
        }
    }

    /// Clears the array now and returns the time spent doing so.
    pub(crate) fn reset(&mut self) -> u64 {
        let start = Instant::now();
        if let Some(a) = self.arr.as_mut() {
            let len = self.pool.len;
            let lg = (usize::BITS - len.max(2).leading_zeros()) as usize;
            let reinit = match self.pool.strategy {
                ResetStrategy::Auto => self.touched.len() > len / lg,
                ResetStrategy::Unmark => false,
                ResetStrategy::Reinit => true,
            };
            if reinit {
                a.init(len, 0);
            } else {
                for &d in &self.touched {
                    a.set(d as usize - 1, 0);
                }
            }
        }
        self.touched.clear();
        let ns = start.elapsed().as_nanos() as u64;
        self.reset_ns += ns;
        ns
    }
}

impl Drop for Marks<'_> {
    fn drop(&mut self) {
        self.reset();
        if let Some(a) = self.arr.take() {
            self.pool
                .free
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .push(a);
        }
    }
}
