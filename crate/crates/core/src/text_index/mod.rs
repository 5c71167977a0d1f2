//! Generalized suffix array over a document collection.
//!
//! The text is `T_1 $ T_2 $ ... T_D $` with separators stored as `0`.
//! Suffixes are ordered with every separator smaller than all symbols and
//! separators ordered among themselves by text position, so each `$` behaves
//! as a distinct terminator. Besides the suffix array `A` and its inverse the
//! index keeps:
//!
//! - `B`: bitvector with 1s at separator positions,
//! - `C[i]`: document owning suffix `A[i]`,
//! - `L[i]`: previous cell of the same document, or 0,
//! - `NXT[i]`: next cell of the same document, or `n + 1`,
//! - per-document suffix arrays `A_d` and inverses over `T_d $`, stored
//!   side by side in text order (document `d` occupies the same zone it has
//!   in the text).
//!
//! Slices returned by accessors are 0-indexed containers of 1-based values:
//! `suffix_array()[i - 1] == A[i]`.

mod collection;
mod sais;

use std::cmp::Ordering;

pub use collection::{DocumentCollection, IngestMode, Separator};

use crate::error::{check_interval, Error, Result};
use crate::succinct::{BitVector, SpaceUsage};

#[derive(Debug, Clone, PartialEq)]
pub struct TextIndex {
    pub(crate) text: Vec<u32>,
    pub(crate) sa: Vec<u32>,
    pub(crate) isa: Vec<u32>,
    pub(crate) boundaries: BitVector,
    pub(crate) doc_array: Vec<u32>,
    pub(crate) pred: Vec<u32>,
    pub(crate) succ: Vec<u32>,
    pub(crate) local_sa: Vec<u32>,
    pub(crate) local_isa: Vec<u32>,
    pub(crate) meta: CorpusMeta,
}

/// Collection properties that are not derivable from the text.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMeta {
    pub sigma: u32,
    pub mode: IngestMode,
    pub separator: u8,
    pub vocabulary: Option<Vec<String>>,
    pub names: Option<Vec<String>>,
}

impl TextIndex {
    pub fn build(coll: &DocumentCollection) -> Result<Self> {
        let n = coll.text_len();
        let num_docs = coll.num_docs();
        let mut text = Vec::with_capacity(n);
        let mut separators = Vec::with_capacity(num_docs);
        for d in coll.docs() {
            text.extend_from_slice(d);
            text.push(0);
            separators.push(text.len());
        }

        // Separators become 1..=D in text order, symbols move above them, and
        // a unique 0 sentinel closes the string.
        let shift = num_docs as u32;
        let mut shifted = Vec::with_capacity(n + 1);
        let mut doc = 0u32;
        for &c in &text {
            if c == 0 {
                doc += 1;
                shifted.push(doc);
            } else {
                shifted.push(c + shift);
            }
        }
        shifted.push(0);
        let alphabet = coll.sigma() as usize + num_docs + 1;
        let mut sa = sais::suffix_array(&shifted, alphabet);
        drop(shifted);
        sa.remove(0);
        for x in sa.iter_mut() {
            *x += 1;
        }

        let boundaries = BitVector::from_positions(n, separators.iter().copied())?;
        let meta = CorpusMeta {
            sigma: coll.sigma(),
            mode: coll.mode(),
            separator: coll.separator(),
            vocabulary: coll.vocabulary().map(<[String]>::to_vec),
            names: coll.names().map(<[String]>::to_vec),
        };
        Ok(Self::from_text_and_sa(text, sa, boundaries, meta))
    }

    /// Derives every other array from the text, suffix array and boundaries.
    pub(crate) fn from_text_and_sa(
        text: Vec<u32>,
        sa: Vec<u32>,
        boundaries: BitVector,
        meta: CorpusMeta,
    ) -> Self {
        let n = text.len();
        let num_docs = boundaries.count_ones();

        let mut isa = vec![0u32; n];
        for (i, &p) in sa.iter().enumerate() {
            isa[p as usize - 1] = i as u32 + 1;
        }

        let mut doc_of_pos = vec![0u32; n];
        let mut d = 1u32;
        for (p, &c) in text.iter().enumerate() {
            doc_of_pos[p] = d;
            if c == 0 {
                d += 1;
            }
        }
        let doc_array: Vec<u32> = sa.iter().map(|&p| doc_of_pos[p as usize - 1]).collect();
        drop(doc_of_pos);

        let mut last = vec![0u32; num_docs + 1];
        let mut pred = vec![0u32; n];
        for (i, &d) in doc_array.iter().enumerate() {
            pred[i] = last[d as usize];
            last[d as usize] = i as u32 + 1;
        }
        last.fill(n as u32 + 1);
        let mut succ = vec![0u32; n];
        for (i, &d) in doc_array.iter().enumerate().rev() {
            succ[i] = last[d as usize];
            last[d as usize] = i as u32 + 1;
        }

        // Each document's suffixes appear in A in their local order, so the
        // local arrays fall out of one pass over A.
        let mut starts = Vec::with_capacity(num_docs + 1);
        starts.push(1u32);
        for d in 1..=num_docs {
            starts.push(boundaries.select1(d) as u32 + 1);
        }
        let mut fill = vec![0u32; num_docs + 1];
        let mut local_sa = vec![0u32; n];
        let mut local_isa = vec![0u32; n];
        for (i, &p) in sa.iter().enumerate() {
            let d = doc_array[i] as usize;
            let s = starts[d - 1];
            fill[d] += 1;
            let j = fill[d];
            local_sa[(s - 1 + j - 1) as usize] = p - s + 1;
            local_isa[(p - 1) as usize] = j;
        }

        TextIndex {
            text,
            sa,
            isa,
            boundaries,
            doc_array,
            pred,
            succ,
            local_sa,
            local_isa,
            meta,
        }
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn num_docs(&self) -> usize {
        self.boundaries.count_ones()
    }

    pub fn meta(&self) -> &CorpusMeta {
        &self.meta
    }

    pub fn sigma(&self) -> u32 {
        self.meta.sigma
    }

    pub fn text(&self) -> &[u32] {
        &self.text
    }

    pub fn suffix_array(&self) -> &[u32] {
        &self.sa
    }

    pub fn inverse_suffix_array(&self) -> &[u32] {
        &self.isa
    }

    pub fn boundaries(&self) -> &BitVector {
        &self.boundaries
    }

    pub fn doc_array(&self) -> &[u32] {
        &self.doc_array
    }

    pub fn predecessors(&self) -> &[u32] {
        &self.pred
    }

    pub fn successors(&self) -> &[u32] {
        &self.succ
    }

    /// Rebuilds the document collection from the stored text.
    pub fn collection(&self) -> DocumentCollection {
        let docs = self
            .text
            .split(|&c| c == 0)
            .take(self.num_docs())
            .map(<[u32]>::to_vec)
            .collect();
        DocumentCollection::from_parts(
            docs,
            self.meta.sigma,
            self.meta.mode,
            self.meta.separator,
            self.meta.vocabulary.clone(),
            self.meta.names.clone(),
        )
        .expect("index holds a valid collection")
    }

    fn check_doc(&self, d: u32) -> Result<()> {
        if d == 0 || d as usize > self.num_docs() {
            Err(Error::range("document", d as usize, 1, self.num_docs()))
        } else {
            Ok(())
        }
    }

    /// First text position of document `d`.
    pub fn doc_start(&self, d: u32) -> Result<usize> {
        self.check_doc(d)?;
        Ok(1 + self.boundaries.select1(d as usize - 1))
    }

    /// Length of document `d` without its separator.
    pub fn doc_len(&self, d: u32) -> Result<usize> {
        let s = self.doc_start(d)?;
        Ok(self.boundaries.select1(d as usize) - s)
    }

    /// `A_d` as a slice of length `n_d + 1`.
    pub fn local_suffix_array(&self, d: u32) -> Result<&[u32]> {
        let s = self.doc_start(d)?;
        let e = self.boundaries.select1(d as usize);
        Ok(&self.local_sa[s - 1..e])
    }

    /// Compares the suffix at 1-based text position `p` against `pattern`,
    /// treating a suffix that has `pattern` as a prefix as equal.
    fn cmp_suffix(&self, p: usize, pattern: &[u32]) -> Ordering {
        let suffix = &self.text[p - 1..];
        for (k, &x) in pattern.iter().enumerate() {
            match suffix.get(k) {
                None => return Ordering::Less,
                Some(&c) if c != x => return c.cmp(&x),
                _ => {}
            }
        }
        Ordering::Equal
    }

    fn check_pattern(&self, pattern: &[u32]) -> Result<()> {
        if pattern.is_empty() {
            return Err(Error::InvalidPattern("empty pattern".into()));
        }
        if let Some(&c) = pattern.iter().find(|&&c| c == 0 || c > self.meta.sigma) {
            return Err(Error::InvalidPattern(format!(
                "symbol {c} outside alphabet [1..{}]",
                self.meta.sigma
            )));
        }
        Ok(())
    }

    /// Suffix-array interval `[sp, ep]` of the suffixes prefixed by
    /// `pattern`, or `None` when it does not occur.
    pub fn pattern_range(&self, pattern: &[u32]) -> Result<Option<(usize, usize)>> {
        self.check_pattern(pattern)?;
        let sp = self
            .sa
            .partition_point(|&p| self.cmp_suffix(p as usize, pattern) == Ordering::Less);
        let ep = sp
            + self.sa[sp..]
                .partition_point(|&p| self.cmp_suffix(p as usize, pattern) == Ordering::Equal);
        Ok(if sp == ep { None } else { Some((sp + 1, ep)) })
    }

    /// Text positions `A[sp..=ep]` in suffix-array order.
    pub fn locate(&self, sp: usize, ep: usize) -> Result<Vec<usize>> {
        check_interval(sp, ep, self.len())?;
        Ok(self.sa[sp - 1..ep].iter().map(|&p| p as usize).collect())
    }

    /// Stored `C[i]`.
    pub fn doc_of_suffix(&self, i: usize) -> Result<u32> {
        if i == 0 || i > self.len() {
            return Err(Error::range("suffix-array cell", i, 1, self.len()));
        }
        Ok(self.doc_array[i - 1])
    }

    /// `C[i]` recomputed as `1 + rank1(B, A[i] - 1)`.
    pub fn doc_of_suffix_by_rank(&self, i: usize) -> Result<u32> {
        if i == 0 || i > self.len() {
            return Err(Error::range("suffix-array cell", i, 1, self.len()));
        }
        let p = self.sa[i - 1] as usize;
        Ok(1 + self.boundaries.rank1(p - 1) as u32)
    }

    /// Maps global cell `i` to `(d, j)` with `A_d[j]` naming the same suffix.
    /// A separator suffix maps to its document's local position of `$`.
    pub fn global_to_local(&self, i: usize) -> Result<(u32, usize)> {
        if i == 0 || i > self.len() {
            return Err(Error::range("suffix-array cell", i, 1, self.len()));
        }
        let p = self.sa[i - 1] as usize;
        let d = 1 + self.boundaries.rank1(p - 1);
        let s = 1 + self.boundaries.select1(d - 1);
        let j = self.local_isa[s - 1 + (p - s + 1) - 1] as usize;
        Ok((d as u32, j))
    }

    /// Inverse of [`TextIndex::global_to_local`].
    pub fn local_to_global(&self, d: u32, j: usize) -> Result<usize> {
        let s = self.doc_start(d)?;
        let zone = self.doc_len(d)? + 1;
        if j == 0 || j > zone {
            return Err(Error::range("local position", j, 1, zone));
        }
        Ok(self.local_to_global_unchecked(s, j))
    }

    #[inline]
    pub(crate) fn local_to_global_unchecked(&self, doc_start: usize, j: usize) -> usize {
        let local = self.local_sa[doc_start - 1 + j - 1] as usize;
        self.isa[doc_start - 1 + local - 1] as usize
    }

    /// See [`DocumentCollection::encode_tokens`].
    pub fn encode_tokens(&self, pattern: &str) -> Result<Option<Vec<u32>>> {
        collection::encode_tokens(self.meta.vocabulary.as_deref(), pattern)
    }

    /// See [`DocumentCollection::encode_bytes`].
    pub fn encode_bytes(&self, pattern: &[u8]) -> Result<Vec<u32>> {
        collection::encode_bytes(self.meta.separator, pattern)
    }

    pub fn space_report(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("text", self.text.size_in_bits()),
            ("A", self.sa.size_in_bits()),
            ("A_inv", self.isa.size_in_bits()),
            ("B", self.boundaries.size_in_bits()),
            ("C", self.doc_array.size_in_bits()),
            ("L", self.pred.size_in_bits()),
            ("NXT", self.succ.size_in_bits()),
            (
                "local_sa",
                self.local_sa.size_in_bits() + self.local_isa.size_in_bits(),
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running() -> TextIndex {
        let c =
            DocumentCollection::from_token_docs(&["mi ma ma", "la ma la", "me mi ma", "la me me"])
                .unwrap();
        TextIndex::build(&c).unwrap()
    }

    #[test]
    fn running_example_arrays() {
        let idx = running();
        assert_eq!(idx.len(), 16);
        assert_eq!(idx.suffix_array()[9], 6);
        assert_eq!(
            idx.doc_array(),
            &[1, 2, 3, 4, 2, 2, 4, 1, 3, 2, 1, 4, 4, 3, 3, 1]
        );
        assert_eq!(
            idx.predecessors(),
            &[0, 0, 0, 0, 2, 5, 4, 1, 3, 6, 8, 7, 12, 9, 14, 11]
        );
        for i in 1..=16 {
            assert_eq!(
                idx.doc_of_suffix(i).unwrap(),
                idx.doc_of_suffix_by_rank(i).unwrap()
            );
        }
        assert_eq!(idx.doc_of_suffix(10).unwrap(), 2);
        assert_eq!(idx.doc_of_suffix(1).unwrap(), 1);
        assert_eq!(idx.doc_of_suffix(16).unwrap(), 1);
        assert!(idx.doc_of_suffix(17).is_err());
    }

    #[test]
    fn single_document_orders_runs_by_length() {
        let c = DocumentCollection::from_sequences(vec![vec![1, 1, 1]], 1).unwrap();
        let idx = TextIndex::build(&c).unwrap();
        assert_eq!(idx.suffix_array(), &[4, 3, 2, 1]);
    }

    #[test]
    fn pattern_ranges_and_locate() {
        let idx = running();
        // la=1 ma=2 me=3 mi=4
        assert_eq!(idx.pattern_range(&[4]).unwrap(), Some((15, 16)));
        assert_eq!(idx.pattern_range(&[2]).unwrap(), Some((8, 11)));
        assert_eq!(idx.pattern_range(&[2, 1, 2]).unwrap(), None);
        assert_eq!(idx.locate(15, 16).unwrap(), vec![10, 1]);
        let (sp, ep) = idx.pattern_range(&[2, 2]).unwrap().unwrap();
        assert_eq!(idx.locate(sp, ep).unwrap(), vec![2]);
        assert!(idx.pattern_range(&[]).is_err());
        assert!(idx.pattern_range(&[0]).is_err());
        assert!(idx.pattern_range(&[5]).is_err());
        assert!(idx.locate(3, 2).is_err());
    }

    #[test]
    fn local_mapping() {
        let idx = running();
        assert_eq!(idx.global_to_local(10).unwrap(), (2, 4));
        assert_eq!(idx.local_to_global(2, 4).unwrap(), 10);
        // T_1$ = "mi ma ma $": A_1 = [4, 3, 2, 1].
        assert_eq!(idx.local_suffix_array(1).unwrap(), &[4, 3, 2, 1]);
        assert_eq!(idx.global_to_local(16).unwrap(), (1, 4));
        assert_eq!(idx.local_to_global(1, 4).unwrap(), 16);
        // Separator suffix of document 2 sits at A[2].
        assert_eq!(idx.global_to_local(2).unwrap(), (2, 1));
        for i in 1..=16 {
            let (d, j) = idx.global_to_local(i).unwrap();
            assert_eq!(idx.local_to_global(d, j).unwrap(), i);
        }
        assert!(idx.local_to_global(2, 5).is_err());
        assert!(idx.local_to_global(5, 1).is_err());
    }

    #[test]
    fn successor_array() {
        let idx = running();
        assert_eq!(&idx.successors()[7..11], &[11, 14, 17, 16]);
    }
}
