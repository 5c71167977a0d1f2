//! Brute-force reference answers computed straight from the documents.
//!
//! Nothing here touches suffix arrays, bitvectors or wavelet trees; the
//! structural arrays are re-derived by comparison sorting and scanning.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::text_index::DocumentCollection;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveCorpus {
    docs: Vec<Vec<u32>>,
}

/// What [`NaiveCorpus::query`] computes.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleKind<'a> {
    List,
    ListFreq,
    Df,
    TopK(usize),
    TopKWeighted(usize, &'a [f64]),
}

/// Answer of [`NaiveCorpus::query`]: `(doc, tf)` pairs or a count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    Docs(Vec<(u32, usize)>),
    Count(usize),
}

impl NaiveCorpus {
    pub fn new(coll: &DocumentCollection) -> Self {
        NaiveCorpus {
            docs: coll.docs().to_vec(),
        }
    }

    pub fn from_docs(docs: Vec<Vec<u32>>) -> Self {
        NaiveCorpus { docs }
    }

    pub fn docs(&self) -> &[Vec<u32>] {
        &self.docs
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    /// Start positions (1-based) of `pattern` inside document `d`.
    pub fn occ(&self, pattern: &[u32], d: u32) -> Result<Vec<usize>> {
        if d == 0 || d as usize > self.docs.len() {
            return Err(Error::range("document", d as usize, 1, self.docs.len()));
        }
        if pattern.is_empty() {
            return Err(Error::InvalidPattern("empty pattern".into()));
        }
        let doc = &self.docs[d as usize - 1];
        Ok(doc
            .windows(pattern.len())
            .enumerate()
            .filter(|(_, w)| *w == pattern)
            .map(|(i, _)| i + 1)
            .collect())
    }

    /// `(doc, tf)` for every document containing `pattern`, by document.
    pub fn frequencies(&self, pattern: &[u32]) -> Result<Vec<(u32, usize)>> {
        let mut out = Vec::new();
        for d in 1..=self.docs.len() as u32 {
            let tf = self.occ(pattern, d)?.len();
            if tf > 0 {
                out.push((d, tf));
            }
        }
        Ok(out)
    }

    pub fn query(&self, pattern: &[u32], kind: OracleKind<'_>) -> Result<OracleAnswer> {
        let freqs = self.frequencies(pattern)?;
        Ok(match kind {
            OracleKind::List => {
                OracleAnswer::Docs(freqs.into_iter().map(|(d, _)| (d, 0)).collect())
            }
            OracleKind::ListFreq => OracleAnswer::Docs(freqs),
            OracleKind::Df => OracleAnswer::Count(freqs.len()),
            OracleKind::TopK(k) => OracleAnswer::Docs(top_by_freq(freqs, k)),
            OracleKind::TopKWeighted(k, w) => {
                if w.len() != self.docs.len() {
                    return Err(Error::WeightDimensionMismatch {
                        expected: self.docs.len(),
                        got: w.len(),
                    });
                }
                OracleAnswer::Docs(top_by_weight(freqs, k, w))
            }
        })
    }

    /// Concatenated text `T_1 $ ... T_D $` with separators as 0.
    pub fn text(&self) -> Vec<u32> {
        let mut t = Vec::new();
        for d in &self.docs {
            t.extend_from_slice(d);
            t.push(0);
        }
        t
    }

    /// Suffix array by direct comparison of suffixes, where each separator
    /// sorts below every symbol and separators sort by position.
    pub fn suffix_array(&self) -> Vec<u32> {
        let text = self.text();
        let mut sa: Vec<u32> = (1..=text.len() as u32).collect();
        sa.sort_by(|&a, &b| compare_suffixes(&text, a as usize - 1, b as usize - 1));
        sa
    }

    /// Document owning each text position.
    fn doc_of_position(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for (d, doc) in self.docs.iter().enumerate() {
            v.extend(std::iter::repeat_n(d as u32 + 1, doc.len() + 1));
        }
        v
    }

    pub fn doc_array(&self) -> Vec<u32> {
        let owner = self.doc_of_position();
        self.suffix_array()
            .iter()
            .map(|&p| owner[p as usize - 1])
            .collect()
    }

    /// `L` by scanning backwards from each cell.
    pub fn predecessors(&self) -> Vec<u32> {
        let c = self.doc_array();
        (0..c.len())
            .map(|i| {
                (0..i)
                    .rev()
                    .find(|&j| c[j] == c[i])
                    .map_or(0, |j| j as u32 + 1)
            })
            .collect()
    }

    /// `NXT` by scanning forwards from each cell.
    pub fn successors(&self) -> Vec<u32> {
        let c = self.doc_array();
        let n = c.len();
        (0..n)
            .map(|i| {
                (i + 1..n)
                    .find(|&j| c[j] == c[i])
                    .map_or(n as u32 + 1, |j| j as u32 + 1)
            })
            .collect()
    }

    /// Suffix array of `T_d $` alone.
    pub fn local_suffix_array(&self, d: u32) -> Vec<u32> {
        let mut t = self.docs[d as usize - 1].clone();
        t.push(0);
        let mut sa: Vec<u32> = (1..=t.len() as u32).collect();
        sa.sort_by(|&a, &b| compare_suffixes(&t, a as usize - 1, b as usize - 1));
        sa
    }
}

/// Sorts `(doc, tf)` by decreasing tf then doc and keeps `k`.
pub fn top_by_freq(mut freqs: Vec<(u32, usize)>, k: usize) -> Vec<(u32, usize)> {
    freqs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    freqs.truncate(k);
    freqs
}

/// Sorts `(doc, tf)` by decreasing `weights[doc - 1]` then doc and keeps `k`.
pub fn top_by_weight(mut freqs: Vec<(u32, usize)>, k: usize, weights: &[f64]) -> Vec<(u32, usize)> {
    freqs.sort_by(|a, b| {
        weights[b.0 as usize - 1]
            .total_cmp(&weights[a.0 as usize - 1])
            .then(a.0.cmp(&b.0))
    });
    freqs.truncate(k);
    freqs
}

fn compare_suffixes(text: &[u32], a: usize, b: usize) -> Ordering {
    let (mut i, mut j) = (a, b);
    loop {
        let (x, y) = (text[i], text[j]);
        if x == 0 && y == 0 {
            return i.cmp(&j);
        }
        match x.cmp(&y) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            o => return o,
        }
    }
}
