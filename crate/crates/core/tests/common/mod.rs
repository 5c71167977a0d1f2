#![allow(dead_code)]

use proptest::prelude::*;
use seqdocs::DocumentCollection;

pub fn running_example() -> DocumentCollection {
    DocumentCollection::from_token_docs(&["mi ma ma", "la ma la", "me mi ma", "la me me"]).unwrap()
}

/// Small random collections, including repetitive ones.
pub fn collection() -> impl Strategy<Value = DocumentCollection> {
    prop_oneof![Just(1u32), Just(2u32), Just(3u32), Just(26u32)].prop_flat_map(|sigma| {
        prop::collection::vec(prop::collection::vec(1..=sigma, 1..24), 1..9)
            .prop_map(move |docs| DocumentCollection::from_sequences(docs, sigma).unwrap())
    })
}

/// A pattern drawn from the collection text or at random.
pub fn pattern_for(c: &DocumentCollection, seed: u64, len: usize) -> Vec<u32> {
    let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = move || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    let len = len.max(1);
    if next() % 10 < 7 {
        let d = &c.docs()[(next() % c.num_docs() as u64) as usize];
        let start = (next() % d.len() as u64) as usize;
        let end = (start + len).min(d.len());
        d[start..end].to_vec()
    } else {
        (0..len)
            .map(|_| 1 + (next() % c.sigma() as u64) as u32)
            .collect()
    }
}
