//! Succinct document retrieval over collections of integer sequences.
//!
//! A collection of documents `T_1, ..., T_D` is concatenated into a single
//! text `T_1 $ T_2 $ ... T_D $` and indexed with a generalized suffix array.
//! On top of the suffix array the crate keeps the document array `C`, the
//! predecessor array `L` and its dual `NXT`, and uses range-minimum indexes
//! and wavelet trees over them to answer:
//!
//! - document listing (which documents contain a pattern),
//! - listing with term frequencies,
//! - document frequency,
//! - top-k most frequent and top-k most important documents.
//!
//! # Conventions
//!
//! All positions exposed by the public API are 1-based, matching the way the
//! algorithms are usually stated: suffix-array cells are `1..=n`, text
//! positions are `1..=n`, documents are `1..=D`, and `0` is used as the
//! "no position" sentinel (for example `L[i] = 0` for a first occurrence, and
//! `rank(0) = select(0) = 0`).

pub mod error;
pub mod format;
pub mod oracle;
pub mod retrieval;
pub mod succinct;
pub mod text_index;
pub mod wavelet;

mod codec;

pub use error::{Error, Result};
pub use retrieval::{FreqBackend, Hit, HitList, ListingStats, QueryEngine};
pub use succinct::{BitVector, InitializableArray, RmqIndex, RmqMode, SpaceUsage};
pub use text_index::{DocumentCollection, IngestMode, TextIndex};
pub use wavelet::WaveletTree;
