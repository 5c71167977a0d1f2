//! Document collections and corpus ingestion.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IngestMode {
    /// Raw bytes; one symbol per byte.
    Bytes,
    /// Whitespace-separated tokens mapped to integers by sorted vocabulary.
    Tokens,
}

/// How documents are delimited inside a single input file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separator {
    Byte(u8),
    /// Bytes mode: pick the smallest byte absent from the corpus.
    /// Tokens mode: newline.
    Auto,
}

/// Ordered, nonempty integer sequences over `[1..sigma]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentCollection {
    docs: Vec<Vec<u32>>,
    names: Option<Vec<String>>,
    sigma: u32,
    mode: IngestMode,
    separator: u8,
    vocabulary: Option<Vec<String>>,
}

impl DocumentCollection {
    /// Wraps integer documents over `[1..sigma]`.
    pub fn from_sequences(docs: Vec<Vec<u32>>, sigma: u32) -> Result<Self> {
        validate(&docs, sigma)?;
        Ok(DocumentCollection {
            docs,
            names: None,
            sigma,
            mode: IngestMode::Tokens,
            separator: b'\n',
            vocabulary: None,
        })
    }

    /// Byte documents; `separator` must not occur in any of them. Byte `x`
    /// maps to symbol `x + 1` below the separator and to `x` above it, so
    /// the alphabet is `[1..255]`.
    pub fn from_bytes<D: AsRef<[u8]>>(docs: &[D], separator: u8) -> Result<Self> {
        let mut out = Vec::with_capacity(docs.len());
        for d in docs {
            let d = d.as_ref();
            if d.contains(&separator) {
                return Err(Error::SeparatorCollision { byte: separator });
            }
            out.push(d.iter().map(|&x| byte_symbol(x, separator)).collect());
        }
        validate(&out, 255)?;
        Ok(DocumentCollection {
            docs: out,
            names: None,
            sigma: 255,
            mode: IngestMode::Bytes,
            separator,
            vocabulary: None,
        })
    }

    /// Token documents; the vocabulary is sorted so ids are reproducible.
    pub fn from_token_docs<S: AsRef<str>>(docs: &[S]) -> Result<Self> {
        let mut vocab = BTreeSet::new();
        for d in docs {
            vocab.extend(d.as_ref().split_whitespace());
        }
        if vocab.len() > (u32::MAX - 1) as usize {
            return Err(Error::VocabularyOverflow);
        }
        let vocabulary: Vec<String> = vocab.into_iter().map(str::to_owned).collect();
        let seqs = docs
            .iter()
            .map(|d| {
                d.as_ref()
                    .split_whitespace()
                    .map(|t| vocabulary.binary_search_by(|v| v.as_str().cmp(t)).unwrap() as u32 + 1)
                    .collect()
            })
            .collect::<Vec<Vec<u32>>>();
        let sigma = vocabulary.len().max(1) as u32;
        validate(&seqs, sigma)?;
        Ok(DocumentCollection {
            docs: seqs,
            names: None,
            sigma,
            mode: IngestMode::Tokens,
            separator: b'\n',
            vocabulary: Some(vocabulary),
        })
    }

    /// Reads a corpus directory (one document per file, by file name) or a
    /// single file whose records are split on the separator. A trailing
    /// separator at the end of the file terminates the last record.
    pub fn ingest(source: &Path, mode: IngestMode, separator: Separator) -> Result<Self> {
        if source.is_dir() {
            let mut entries: Vec<_> = fs::read_dir(source)?
                .filter_map(|e| e.ok())
                .filter(|e| e.path().is_file())
                .collect();
            entries.sort_by_key(|e| e.file_name());
            if entries.is_empty() {
                return Err(Error::EmptyCorpus);
            }
            let names: Vec<String> = entries
                .iter()
                .map(|e| e.file_name().to_string_lossy().into_owned())
                .collect();
            let contents = entries
                .iter()
                .map(|e| fs::read(e.path()))
                .collect::<std::io::Result<Vec<_>>>()?;
            let mut coll = Self::from_raw(&contents, mode, separator)?;
            coll.names = Some(names);
            Ok(coll)
        } else {
            let data = fs::read(source)?;
            let sep = match (separator, mode) {
                (Separator::Byte(b), _) => b,
                (Separator::Auto, IngestMode::Tokens) => b'\n',
                (Separator::Auto, IngestMode::Bytes) => {
                    return Err(Error::Config(
                        "a single-file byte corpus needs an explicit --sep".into(),
                    ))
                }
            };
            let mut records: Vec<&[u8]> = data.split(|&b| b == sep).collect();
            if records.len() > 1 && records.last().is_some_and(|r| r.is_empty()) {
                records.pop();
            }
            if records.len() == 1 && records[0].is_empty() {
                return Err(Error::EmptyCorpus);
            }
            Self::from_raw(&records, mode, Separator::Byte(sep))
        }
    }

    fn from_raw<D: AsRef<[u8]>>(raw: &[D], mode: IngestMode, separator: Separator) -> Result<Self> {
        match mode {
            IngestMode::Bytes => {
                let sep = match separator {
                    Separator::Byte(b) => b,
                    Separator::Auto => free_byte(raw)?,
                };
                Self::from_bytes(raw, sep)
            }
            IngestMode::Tokens => {
                let texts = raw
                    .iter()
                    .map(|r| String::from_utf8_lossy(r.as_ref()).into_owned())
                    .collect::<Vec<_>>();
                let mut coll = Self::from_token_docs(&texts)?;
                if let Separator::Byte(b) = separator {
                    coll.separator = b;
                }
                Ok(coll)
            }
        }
    }

    /// Restores a collection from its stored parts.
    pub(crate) fn from_parts(
        docs: Vec<Vec<u32>>,
        sigma: u32,
        mode: IngestMode,
        separator: u8,
        vocabulary: Option<Vec<String>>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        validate(&docs, sigma)?;
        Ok(DocumentCollection {
            docs,
            names,
            sigma,
            mode,
            separator,
            vocabulary,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.docs.len() {
            return Err(Error::Config(format!(
                "{} names for {} documents",
                names.len(),
                self.docs.len()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn docs(&self) -> &[Vec<u32>] {
        &self.docs
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn mode(&self) -> IngestMode {
        self.mode
    }

    pub fn separator(&self) -> u8 {
        self.separator
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn vocabulary(&self) -> Option<&[String]> {
        self.vocabulary.as_deref()
    }

    /// Total text length counting one separator per document.
    pub fn text_len(&self) -> usize {
        self.docs.iter().map(|d| d.len() + 1).sum()
    }

    /// Translates a user pattern into symbols. `None` means the pattern uses
    /// a token that never occurs, so it cannot match.
    pub fn encode_tokens(&self, pattern: &str) -> Result<Option<Vec<u32>>> {
        encode_tokens(self.vocabulary.as_deref(), pattern)
    }

    /// Translates raw pattern bytes into symbols.
    pub fn encode_bytes(&self, pattern: &[u8]) -> Result<Vec<u32>> {
        encode_bytes(self.separator, pattern)
    }
}

pub(crate) fn encode_tokens(
    vocabulary: Option<&[String]>,
    pattern: &str,
) -> Result<Option<Vec<u32>>> {
    let vocab =
        vocabulary.ok_or_else(|| Error::InvalidPattern("collection has no vocabulary".into()))?;
    let mut out = Vec::new();
    for t in pattern.split_whitespace() {
        match vocab.binary_search_by(|v| v.as_str().cmp(t)) {
            Ok(i) => out.push(i as u32 + 1),
            Err(_) => return Ok(None),
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidPattern("empty pattern".into()));
    }
    Ok(Some(out))
}

pub(crate) fn encode_bytes(separator: u8, pattern: &[u8]) -> Result<Vec<u32>> {
    if pattern.is_empty() {
        return Err(Error::InvalidPattern("empty pattern".into()));
    }
    if pattern.contains(&separator) {
        return Err(Error::InvalidPattern(format!(
            "pattern contains the separator byte 0x{separator:02x}"
        )));
    }
    Ok(pattern.iter().map(|&b| byte_symbol(b, separator)).collect())
}

#[inline]
fn byte_symbol(x: u8, sep: u8) -> u32 {
    if x < sep {
        x as u32 + 1
    } else {
        x as u32
    }
}

fn free_byte<D: AsRef<[u8]>>(raw: &[D]) -> Result<u8> {
    let mut seen = [false; 256];
    for d in raw {
        for &b in d.as_ref() {
            seen[b as usize] = true;
        }
    }
    seen.iter()
        .position(|&s| !s)
        .map(|b| b as u8)
        .ok_or(Error::NoFreeSeparator)
}

fn validate(docs: &[Vec<u32>], sigma: u32) -> Result<()> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if docs.len() >= u32::MAX as usize {
        return Err(Error::Config("too many documents".into()));
    }
    for (i, d) in docs.iter().enumerate() {
        if d.is_empty() {
            return Err(Error::EmptyDocument { index: i + 1 });
        }
        if let Some(&c) = d.iter().find(|&&c| c == 0 || c > sigma) {
            return Err(Error::Alphabet {
                symbol: c as u64,
                lo: 1,
                hi: sigma as u64,
            });
        }
    }
    let n: usize = docs.iter().map(|d| d.len() + 1).sum();
    if n >= u32::MAX as usize {
        return Err(Error::Config("collection exceeds 2^32-2 symbols".into()));
    }
    Ok(())
}
