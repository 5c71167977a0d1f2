//! Documents relabeled by decreasing weight, so the most important
//! documents in a range are its smallest distinct labels.

use crate::error::{Error, Result};
use crate::succinct::SpaceUsage;
use crate::wavelet::WaveletTree;

#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceIndex {
    pub(crate) weights: Vec<f64>,
    /// `label_of[d - 1]`: rank of document `d` by (weight desc, id asc).
    pub(crate) label_of: Vec<u32>,
    /// `doc_of[r - 1]`: document with rank `r`.
    pub(crate) doc_of: Vec<u32>,
    pub(crate) tree: WaveletTree,
}

impl ImportanceIndex {
    pub fn build(doc_array: &[u32], weights: &[f64]) -> Result<Self> {
        let num_docs = weights.len();
        if let Some(d) = weights.iter().position(|w| w.is_nan()) {
            return Err(Error::InvalidWeight { doc: d + 1 });
        }
        let mut doc_of: Vec<u32> = (1..=num_docs as u32).collect();
        doc_of.sort_by(|&a, &b| {
            weights[b as usize - 1]
                .total_cmp(&weights[a as usize - 1])
                .then(a.cmp(&b))
        });
        let mut label_of = vec![0u32; num_docs];
        for (r, &d) in doc_of.iter().enumerate() {
            label_of[d as usize - 1] = r as u32 + 1;
        }
        let relabeled: Vec<u32> = doc_array
            .iter()
            .map(|&d| label_of[d as usize - 1])
            .collect();
        let tree = WaveletTree::build(&relabeled, num_docs as u32)?;
        Ok(ImportanceIndex {
            weights: weights.to_vec(),
            label_of,
            doc_of,
            tree,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The `k` heaviest documents in `[sp, ep]` with their frequencies.
    pub fn top(&self, sp: usize, ep: usize, k: usize) -> Result<Vec<(u32, usize)>> {
        Ok(self
            .tree
            .k_smallest_distinct(sp, ep, k)?
            .into_iter()
            .map(|(r, f)| (self.doc_of[r as usize - 1], f))
            .collect())
    }
}

impl SpaceUsage for ImportanceIndex {
    fn size_in_bits(&self) -> usize {
        self.weights.len() * 64
            + (self.label_of.len() + self.doc_of.len()) * 32
            + self.tree.size_in_bits()
    }
}
