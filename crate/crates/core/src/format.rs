//! Index file format.
//!
//! ```text
//! magic      8 bytes  "SDRIDX01"
//! word_bits  u8       32 (width of stored positions)
//! mode       u8       0 = bytes, 1 = tokens
//! separator  u8
//! reserved   u8
//! sigma      u32
//! docs       u64
//! n          u64
//! b          u64      block factor
//! flags      u64      bit 0 names, bit 1 vocabulary, bit 2 weights
//! sections   (tag u32, length u64, payload)*   in increasing tag order
//! ```
//!
//! All integers are little-endian. Readers skip sections with unknown tags.
//! Range-query indexes are rebuilt when their section is absent.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::codec;
use crate::error::{Error, Result};
use crate::retrieval::{BlockMinima, ImportanceIndex, QueryEngine, ResetStrategy};
use crate::succinct::{BitVector, RmqIndex, RmqMode};
use crate::text_index::{CorpusMeta, IngestMode, TextIndex};
use crate::wavelet::WaveletTree;

pub const MAGIC: &[u8; 8] = b"SDRIDX01";

const FLAG_NAMES: u64 = 1;
const FLAG_VOCABULARY: u64 = 2;
const FLAG_WEIGHTS: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[repr(u32)]
enum Tag {
    Text = 1,
    Sa = 2,
    Isa = 3,
    Boundaries = 4,
    DocArray = 5,
    Pred = 6,
    Succ = 7,
    WtDocs = 8,
    WtPred = 9,
    BlockMinima = 10,
    LocalSa = 11,
    LocalIsa = 12,
    Vocabulary = 13,
    Names = 14,
    Weights = 15,
    RmqPred = 16,
    RmqSucc = 17,
    RmqBlocks = 18,
}

impl Tag {
    fn from_u32(t: u32) -> Option<Tag> {
        use Tag::*;
        [
            Text,
            Sa,
            Isa,
            Boundaries,
            DocArray,
            Pred,
            Succ,
            WtDocs,
            WtPred,
            BlockMinima,
            LocalSa,
            LocalIsa,
            Vocabulary,
            Names,
            Weights,
            RmqPred,
            RmqSucc,
            RmqBlocks,
        ]
        .into_iter()
        .find(|&x| x as u32 == t)
    }

    pub fn name(self) -> &'static str {
        match self {
            Tag::Text => "text",
            Tag::Sa => "A",
            Tag::Isa => "A_inv",
            Tag::Boundaries => "B",
            Tag::DocArray => "C",
            Tag::Pred => "L",
            Tag::Succ => "NXT",
            Tag::WtDocs => "wt_C",
            Tag::WtPred => "wt_L",
            Tag::BlockMinima => "L_sampled",
            Tag::LocalSa => "local_sa",
            Tag::LocalIsa => "local_isa",
            Tag::Vocabulary => "vocabulary",
            Tag::Names => "names",
            Tag::Weights => "weights",
            Tag::RmqPred => "rmq_L",
            Tag::RmqSucc => "rmq_NXT",
            Tag::RmqBlocks => "rmq_L_sampled",
        }
    }
}

/// Size of one written section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionInfo {
    pub name: &'static str,
    pub bytes: u64,
}

impl SectionInfo {
    /// Bits per text symbol.
    pub fn bpc(&self, n: usize) -> f64 {
        self.bytes as f64 * 8.0 / n.max(1) as f64
    }
}

fn section<W: Write>(
    w: &mut W,
    tag: Tag,
    report: &mut Vec<SectionInfo>,
    body: impl FnOnce(&mut Vec<u8>) -> Result<()>,
) -> Result<()> {
    let mut buf = Vec::new();
    body(&mut buf)?;
    w.write_u32::<LittleEndian>(tag as u32)?;
    w.write_u64::<LittleEndian>(buf.len() as u64)?;
    w.write_all(&buf)?;
    report.push(SectionInfo {
        name: tag.name(),
        bytes: buf.len() as u64,
    });
    Ok(())
}

/// Writes `engine` and returns the size of every section.
pub fn save<W: Write>(engine: &QueryEngine, w: &mut W) -> Result<Vec<SectionInfo>> {
    let idx = &engine.idx;
    let meta = idx.meta();
    let weights = engine.weights();
    let mut flags = 0;
    if meta.names.is_some() {
        flags |= FLAG_NAMES;
    }
    if meta.vocabulary.is_some() {
        flags |= FLAG_VOCABULARY;
    }
    if weights.is_some() {
        flags |= FLAG_WEIGHTS;
    }
    w.write_all(MAGIC)?;
    w.write_u8(32)?;
    w.write_u8(match meta.mode {
        IngestMode::Bytes => 0,
        IngestMode::Tokens => 1,
    })?;
    w.write_u8(meta.separator)?;
    w.write_u8(0)?;
    w.write_u32::<LittleEndian>(meta.sigma)?;
    w.write_u64::<LittleEndian>(idx.num_docs() as u64)?;
    w.write_u64::<LittleEndian>(idx.len() as u64)?;
    w.write_u64::<LittleEndian>(engine.blocks.b as u64)?;
    w.write_u64::<LittleEndian>(flags)?;

    let mut report = Vec::new();
    let r = &mut report;
    section(w, Tag::Text, r, |b| codec::write_u32s(b, &idx.text))?;
    section(w, Tag::Sa, r, |b| codec::write_u32s(b, &idx.sa))?;
    section(w, Tag::Isa, r, |b| codec::write_u32s(b, &idx.isa))?;
    section(w, Tag::Boundaries, r, |b| idx.boundaries.write_to(b))?;
    section(w, Tag::DocArray, r, |b| {
        codec::write_u32s(b, &idx.doc_array)
    })?;
    section(w, Tag::Pred, r, |b| codec::write_u32s(b, &idx.pred))?;
    section(w, Tag::Succ, r, |b| codec::write_u32s(b, &idx.succ))?;
    section(w, Tag::WtDocs, r, |b| engine.wt_docs.write_to(b))?;
    section(w, Tag::WtPred, r, |b| engine.wt_pred.write_to(b))?;
    section(w, Tag::BlockMinima, r, |b| {
        codec::write_u32s(b, &engine.blocks.minima)
    })?;
    section(w, Tag::LocalSa, r, |b| codec::write_u32s(b, &idx.local_sa))?;
    section(w, Tag::LocalIsa, r, |b| {
        codec::write_u32s(b, &idx.local_isa)
    })?;
    if let Some(v) = &meta.vocabulary {
        section(w, Tag::Vocabulary, r, |b| codec::write_strings(b, v))?;
    }
    if let Some(v) = &meta.names {
        section(w, Tag::Names, r, |b| codec::write_strings(b, v))?;
    }
    if let Some(ws) = weights {
        section(w, Tag::Weights, r, |b| {
            let bits: Vec<u64> = ws.iter().map(|x| x.to_bits()).collect();
            codec::write_u64s(b, &bits)
        })?;
    }
    section(w, Tag::RmqPred, r, |b| engine.rmq_min_pred.write_to(b))?;
    section(w, Tag::RmqSucc, r, |b| engine.rmq_max_succ.write_to(b))?;
    section(w, Tag::RmqBlocks, r, |b| engine.blocks.rmq.write_to(b))?;
    Ok(report)
}

pub fn save_to_path(engine: &QueryEngine, path: &Path) -> Result<Vec<SectionInfo>> {
    let mut w = BufWriter::new(File::create(path)?);
    let report = save(engine, &mut w)?;
    w.flush()?;
    Ok(report)
}

#[derive(Default)]
struct Sections {
    text: Option<Vec<u32>>,
    sa: Option<Vec<u32>>,
    isa: Option<Vec<u32>>,
    boundaries: Option<BitVector>,
    doc_array: Option<Vec<u32>>,
    pred: Option<Vec<u32>>,
    succ: Option<Vec<u32>>,
    wt_docs: Option<WaveletTree>,
    wt_pred: Option<WaveletTree>,
    block_minima: Option<Vec<u32>>,
    local_sa: Option<Vec<u32>>,
    local_isa: Option<Vec<u32>>,
    vocabulary: Option<Vec<String>>,
    names: Option<Vec<String>>,
    weights: Option<Vec<f64>>,
    rmq_pred: Option<RmqIndex>,
    rmq_succ: Option<RmqIndex>,
    rmq_blocks: Option<RmqIndex>,
}

fn required<T>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::Format(format!("missing section {what}")))
}

fn format_err(msg: &str) -> Error {
    Error::Format(msg.into())
}

/// Reads an index written by [`save`].
pub fn load<R: Read>(r: &mut R) -> Result<QueryEngine> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)
        .map_err(|_| format_err("truncated header"))?;
    if &magic != MAGIC {
        return Err(format_err("bad magic"));
    }
    let word_bits = r.read_u8()?;
    if word_bits != 32 {
        return Err(Error::Format(format!("unsupported word width {word_bits}")));
    }
    let mode = match r.read_u8()? {
        0 => IngestMode::Bytes,
        1 => IngestMode::Tokens,
        m => return Err(Error::Format(format!("unknown mode {m}"))),
    };
    let separator = r.read_u8()?;
    let _reserved = r.read_u8()?;
    let sigma = r.read_u32::<LittleEndian>()?;
    let num_docs = r.read_u64::<LittleEndian>()? as usize;
    let n = r.read_u64::<LittleEndian>()? as usize;
    let b = r.read_u64::<LittleEndian>()? as usize;
    let flags = r.read_u64::<LittleEndian>()?;

    let mut s = Sections::default();
    loop {
        let tag = match r.read_u32::<LittleEndian>() {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        };
        let len = r.read_u64::<LittleEndian>()?;
        let limit = len as usize;
        let mut body = r.by_ref().take(len);
        let Some(tag) = Tag::from_u32(tag) else {
            io::copy(&mut body, &mut io::sink())?;
            continue;
        };
        let b = &mut body;
        match tag {
            Tag::Text => s.text = Some(codec::read_u32s(b, limit)?),
            Tag::Sa => s.sa = Some(codec::read_u32s(b, limit)?),
            Tag::Isa => s.isa = Some(codec::read_u32s(b, limit)?),
            Tag::Boundaries => s.boundaries = Some(BitVector::read_from(b, limit)?),
            Tag::DocArray => s.doc_array = Some(codec::read_u32s(b, limit)?),
            Tag::Pred => s.pred = Some(codec::read_u32s(b, limit)?),
            Tag::Succ => s.succ = Some(codec::read_u32s(b, limit)?),
            Tag::WtDocs => s.wt_docs = Some(WaveletTree::read_from(b, limit)?),
            Tag::WtPred => s.wt_pred = Some(WaveletTree::read_from(b, limit)?),
            Tag::BlockMinima => s.block_minima = Some(codec::read_u32s(b, limit)?),
            Tag::LocalSa => s.local_sa = Some(codec::read_u32s(b, limit)?),
            Tag::LocalIsa => s.local_isa = Some(codec::read_u32s(b, limit)?),
            Tag::Vocabulary => s.vocabulary = Some(codec::read_strings(b, limit)?),
            Tag::Names => s.names = Some(codec::read_strings(b, limit)?),
            Tag::Weights => {
                s.weights = Some(
                    codec::read_u64s(b, limit)?
                        .into_iter()
                        .map(f64::from_bits)
                        .collect(),
                )
            }
            Tag::RmqPred => s.rmq_pred = Some(RmqIndex::read_from(b, limit)?),
            Tag::RmqSucc => s.rmq_succ = Some(RmqIndex::read_from(b, limit)?),
            Tag::RmqBlocks => s.rmq_blocks = Some(RmqIndex::read_from(b, limit)?),
        }
        if body.limit() != 0 {
            return Err(Error::Format(format!(
                "section {} has trailing bytes",
                tag.name()
            )));
        }
    }

    if (flags & FLAG_NAMES != 0) != s.names.is_some()
        || (flags & FLAG_VOCABULARY != 0) != s.vocabulary.is_some()
        || (flags & FLAG_WEIGHTS != 0) != s.weights.is_some()
    {
        return Err(format_err("header flags disagree with sections"));
    }

    let text = required(s.text, "text")?;
    let sa = required(s.sa, "A")?;
    let boundaries = required(s.boundaries, "B")?;
    if text.len() != n
        || sa.len() != n
        || boundaries.len() != n
        || boundaries.count_ones() != num_docs
    {
        return Err(format_err("array lengths disagree with header"));
    }
    if n == 0 || text.last() != Some(&0) {
        return Err(format_err("text must end with a separator"));
    }
    if text.iter().any(|&c| c > sigma) {
        return Err(format_err("text symbol outside alphabet"));
    }
    for (p, &c) in text.iter().enumerate() {
        if (c == 0) != boundaries.bit(p) {
            return Err(format_err("separator bitmap disagrees with text"));
        }
    }
    let mut seen = vec![false; n];
    for &p in &sa {
        if p == 0 || p as usize > n || std::mem::replace(&mut seen[p as usize - 1], true) {
            return Err(format_err("suffix array is not a permutation"));
        }
    }
    drop(seen);
    if let Some(names) = &s.names {
        if names.len() != num_docs {
            return Err(format_err("name count disagrees with header"));
        }
    }
    if let Some(v) = &s.vocabulary {
        if v.len() != sigma as usize {
            return Err(format_err("vocabulary size disagrees with alphabet"));
        }
    }

    let meta = CorpusMeta {
        sigma,
        mode,
        separator,
        vocabulary: s.vocabulary,
        names: s.names,
    };
    // Derived arrays are recomputed and compared so a corrupt file cannot
    // reach the query code.
    let idx = TextIndex::from_text_and_sa(text, sa, boundaries, meta);
    let stored = [
        (s.isa, &idx.isa, "A_inv"),
        (s.doc_array, &idx.doc_array, "C"),
        (s.pred, &idx.pred, "L"),
        (s.succ, &idx.succ, "NXT"),
        (s.local_sa, &idx.local_sa, "local_sa"),
        (s.local_isa, &idx.local_isa, "local_isa"),
    ];
    for (got, want, name) in stored {
        if required(got, name)? != *want {
            return Err(Error::Format(format!("section {name} is inconsistent")));
        }
    }

    let wt_docs = required(s.wt_docs, "wt_C")?;
    let wt_pred = required(s.wt_pred, "wt_L")?;
    if wt_docs.len() != n
        || wt_docs.alphabet() != (1, num_docs as u32)
        || wt_pred.len() != n
        || wt_pred.alphabet() != (0, n as u32)
    {
        return Err(format_err("wavelet tree shape disagrees with header"));
    }
    let check_rmq = |rmq: Option<RmqIndex>, base: &[u32], mode: RmqMode| -> Result<RmqIndex> {
        match rmq {
            Some(r) if r.len() == base.len() && r.mode() == mode => Ok(r),
            Some(_) => Err(format_err("range-query index shape")),
            None => RmqIndex::build(base, mode),
        }
    };
    let rmq_pred = check_rmq(s.rmq_pred, &idx.pred, RmqMode::Min)?;
    let rmq_succ = check_rmq(s.rmq_succ, &idx.succ, RmqMode::Max)?;
    let minima = required(s.block_minima, "L_sampled")?;
    let blocks = BlockMinima::build(&idx.pred, b)?;
    if minima != blocks.minima {
        return Err(format_err("section L_sampled is inconsistent"));
    }
    let blocks = BlockMinima {
        rmq: check_rmq(s.rmq_blocks, &blocks.minima, RmqMode::Min)?,
        ..blocks
    };
    let importance = match s.weights {
        Some(w) => {
            if w.len() != num_docs {
                return Err(format_err("weight count disagrees with header"));
            }
            Some(ImportanceIndex::build(&idx.doc_array, &w)?)
        }
        None => None,
    };
    Ok(QueryEngine::from_parts(
        idx,
        rmq_pred,
        rmq_succ,
        wt_docs,
        wt_pred,
        blocks,
        importance,
        ResetStrategy::Auto,
    ))
}

pub fn load_path(path: &Path) -> Result<QueryEngine> {
    load(&mut BufReader::new(File::open(path)?))
}
