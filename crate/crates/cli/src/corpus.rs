//! Random corpora and pattern sets for self-tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;
use seqdocs::{DocumentCollection, Result};

/// `docs` documents over `[1..sigma]` with total length about `n`. Lengths
/// are mixed: a few long documents and many short ones.
pub fn random_collection<R: Rng>(
    rng: &mut R,
    n: usize,
    sigma: u32,
    docs: usize,
) -> Result<DocumentCollection> {
    let docs = docs.clamp(1, n.max(1));
    let weights: Vec<f64> = (0..docs)
        .map(|_| {
            let u: f64 = rng.gen_range(0.05..1.0);
            u * u * u
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let spare = n.saturating_sub(docs);
    let seqs = weights
        .iter()
        .map(|w| {
            let len = 1 + (w / total * spare as f64) as usize;
            (0..len).map(|_| rng.gen_range(1..=sigma)).collect()
        })
        .collect();
    DocumentCollection::from_sequences(seqs, sigma)
}

/// `count` patterns with lengths in `[1, max_len]`: a `present` fraction
/// copied from the documents, the rest uniform random (mostly absent for
/// longer lengths).
pub fn random_patterns<R: Rng>(
    rng: &mut R,
    coll: &DocumentCollection,
    count: usize,
    present: f64,
    max_len: usize,
) -> Vec<Vec<u32>> {
    (0..count)
        .map(|_| {
            let m = rng.gen_range(1..=max_len.max(1));
            if rng.gen_bool(present) {
                let d = coll.docs().choose(rng).expect("nonempty collection");
                let start = rng.gen_range(0..d.len());
                d[start..(start + m).min(d.len())].to_vec()
            } else {
                (0..m).map(|_| rng.gen_range(1..=coll.sigma())).collect()
            }
        })
        .collect()
}

/// Weights in `[0, 1)` rounded to a coarse grid so that ties occur.
pub fn random_weights<R: Rng>(rng: &mut R, docs: usize) -> Vec<f64> {
    (0..docs)
        .map(|_| rng.gen_range(0..20) as f64 / 20.0)
        .collect()
}
