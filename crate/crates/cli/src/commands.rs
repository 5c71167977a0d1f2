//! `build` and `query` subcommands.

use std::fs;
use std::io::Write;
use std::path::Path;

use seqdocs::format;
use seqdocs::retrieval::{EngineConfig, ListAlgo};
use seqdocs::text_index::Separator;
use seqdocs::{
    DocumentCollection, Error, FreqBackend, HitList, IngestMode, QueryEngine, Result, TextIndex,
};
use serde::Serialize;

use crate::pattern;

/// Whether a query produced output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Found,
    Empty,
}

/// Reads whitespace-separated weights, one per document.
pub fn read_weights(path: &Path) -> Result<Vec<f64>> {
    fs::read_to_string(path)?
        .split_whitespace()
        .enumerate()
        .map(|(i, w)| {
            w.parse::<f64>()
                .map_err(|_| Error::Config(format!("weight {} ({w:?}) is not a number", i + 1)))
        })
        .collect()
}

/// Parses `--sep`: `auto`, a decimal or `0x` hex byte value, `\n`, `\t`,
/// or a single ASCII character.
pub fn parse_separator(s: &str) -> Result<Separator> {
    let byte = match s {
        "auto" => return Ok(Separator::Auto),
        "\\n" => b'\n',
        "\\t" => b'\t',
        _ if s.len() == 1 && !s.as_bytes()[0].is_ascii_digit() => s.as_bytes()[0],
        _ => match s.strip_prefix("0x") {
            Some(hex) => u8::from_str_radix(hex, 16),
            None => s.parse::<u8>(),
        }
        .map_err(|_| Error::Config(format!("bad separator {s:?}")))?,
    };
    Ok(Separator::Byte(byte))
}

#[derive(Serialize)]
struct SectionJson<'a> {
    name: &'a str,
    bytes: u64,
    bpc: f64,
}

#[derive(Serialize)]
struct BuildJson<'a> {
    docs: usize,
    n: usize,
    sigma: u32,
    block_factor: usize,
    sections: Vec<SectionJson<'a>>,
    total_bpc: f64,
}

pub struct BuildOptions<'a> {
    pub input: &'a Path,
    pub mode: IngestMode,
    pub separator: Separator,
    pub output: &'a Path,
    pub block_factor: Option<usize>,
    pub weights: Option<&'a Path>,
    pub json: bool,
}

pub fn build(opts: &BuildOptions<'_>, out: &mut dyn Write) -> Result<()> {
    let coll = DocumentCollection::ingest(opts.input, opts.mode, opts.separator)?;
    let weights = opts.weights.map(read_weights).transpose()?;
    let engine = QueryEngine::with_config(
        TextIndex::build(&coll)?,
        EngineConfig {
            block_factor: opts.block_factor,
            weights,
            ..Default::default()
        },
    )?;
    let report = format::save_to_path(&engine, opts.output)?;
    let idx = engine.index();
    let n = idx.len();
    let total: u64 = report.iter().map(|s| s.bytes).sum();
    let total_bpc = total as f64 * 8.0 / n as f64;
    if opts.json {
        let j = BuildJson {
            docs: idx.num_docs(),
            n,
            sigma: idx.sigma(),
            block_factor: engine.block_factor(),
            sections: report
                .iter()
                .map(|s| SectionJson {
                    name: s.name,
                    bytes: s.bytes,
                    bpc: s.bpc(n),
                })
                .collect(),
            total_bpc,
        };
        writeln!(out, "{}", serde_json::to_string(&j).map_err(json_err)?)?;
    } else {
        writeln!(
            out,
            "documents {}  n {}  sigma {}  b {}",
            idx.num_docs(),
            n,
            idx.sigma(),
            engine.block_factor()
        )?;
        writeln!(out, "{:<16}{:>14}{:>10}", "section", "bytes", "bpc")?;
        for s in &report {
            writeln!(out, "{:<16}{:>14}{:>10.3}", s.name, s.bytes, s.bpc(n))?;
        }
        writeln!(out, "{:<16}{:>14}{:>10.3}", "total", total, total_bpc)?;
    }
    Ok(())
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryOp {
    List,
    ListFreq,
    Df,
    TopK,
    TopKWeighted,
    Locate,
}

pub struct QueryOptions<'a> {
    pub index: &'a Path,
    pub op: QueryOp,
    pub pattern: &'a str,
    pub k: usize,
    pub algo: Option<&'a str>,
    pub weights: Option<&'a Path>,
    pub json: bool,
}

#[derive(Serialize)]
struct HitJson<'a> {
    doc: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    freq: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    offset: Option<usize>,
}

struct Printer<'a> {
    names: Option<&'a [String]>,
    json: bool,
}

impl Printer<'_> {
    fn record(
        &self,
        out: &mut dyn Write,
        doc: u32,
        freq: Option<u32>,
        offset: Option<usize>,
    ) -> Result<()> {
        let name = self.names.map(|n| n[doc as usize - 1].as_str());
        if self.json {
            let j = HitJson {
                doc,
                name,
                freq,
                offset,
            };
            writeln!(out, "{}", serde_json::to_string(&j).map_err(json_err)?)?;
        } else {
            let mut line = match name {
                Some(n) => n.to_string(),
                None => doc.to_string(),
            };
            for v in [freq.map(|f| f as usize), offset].into_iter().flatten() {
                line.push('\t');
                line.push_str(&v.to_string());
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    fn hits(&self, out: &mut dyn Write, hits: &HitList) -> Result<()> {
        for h in &hits.entries {
            self.record(out, h.doc, h.freq, None)?;
        }
        Ok(())
    }
}

pub fn query(opts: &QueryOptions<'_>, out: &mut dyn Write) -> Result<Outcome> {
    let engine = format::load_path(opts.index)?;
    let idx = engine.index();
    let coll_meta = idx.meta();
    let printer = Printer {
        names: coll_meta.names.as_deref(),
        json: opts.json,
    };
    let symbols = pattern::encode(idx, opts.pattern)?;
    let range = match &symbols {
        Some(s) => engine.pattern_range(s)?,
        None => None,
    };

    let algo = opts.algo;
    match opts.op {
        QueryOp::List => {
            let a = algo.unwrap_or("rmq").parse::<ListAlgo>()?;
            if let Some((sp, ep)) = range {
                printer.hits(out, &engine.list(sp, ep, a)?.0)?;
            }
        }
        QueryOp::ListFreq => {
            let b = algo.unwrap_or("rank").parse::<FreqBackend>()?;
            if let Some((sp, ep)) = range {
                printer.hits(out, &engine.list_with_freq(sp, ep, b)?)?;
            }
        }
        QueryOp::Df => {
            let df = match range {
                Some((sp, ep)) => engine.doc_frequency(sp, ep)?,
                None => 0,
            };
            if opts.json {
                writeln!(out, "{}", serde_json::json!({ "df": df }))?;
            } else {
                writeln!(out, "{df}")?;
            }
        }
        QueryOp::TopK => {
            if let Some((sp, ep)) = range {
                printer.hits(out, &engine.topk_frequent_range(sp, ep, opts.k)?)?;
            }
        }
        QueryOp::TopKWeighted => {
            let weights = match opts.weights {
                Some(p) => read_weights(p)?,
                None => engine
                    .weights()
                    .ok_or_else(|| Error::Config("index has no weights; pass --weights".into()))?
                    .to_vec(),
            };
            if weights.len() != idx.num_docs() {
                return Err(Error::WeightDimensionMismatch {
                    expected: idx.num_docs(),
                    got: weights.len(),
                });
            }
            if let Some((sp, ep)) = range {
                printer.hits(out, &engine.topk_important_range(sp, ep, opts.k, &weights)?)?;
            }
        }
        QueryOp::Locate => {
            if let Some((sp, ep)) = range {
                for i in sp..=ep {
                    let p = idx.suffix_array()[i - 1] as usize;
                    let d = idx.doc_of_suffix(i)?;
                    let offset = p - idx.doc_start(d)? + 1;
                    printer.record(out, d, None, Some(offset))?;
                }
            }
        }
    }
    Ok(if range.is_some() {
        Outcome::Found
    } else {
        Outcome::Empty
    })
}
