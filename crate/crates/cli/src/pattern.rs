//! Command-line pattern syntax.
//!
//! Bytes mode:
//! - `hex:` followed by an even number of hex digits gives those bytes;
//! - otherwise the argument is taken literally, except that `\xNN` is the
//!   byte with hex value `NN`, `\n` is 0x0a, `\t` is 0x09 and `\\` is a
//!   single backslash. Any other backslash sequence is an error.
//!
//! Tokens mode: the argument is split on whitespace into tokens.

use seqdocs::{Error, IngestMode, Result, TextIndex};

pub fn parse_bytes(arg: &str) -> Result<Vec<u8>> {
    if let Some(hex) = arg.strip_prefix("hex:") {
        if hex.len() % 2 != 0 {
            return Err(Error::InvalidPattern("odd number of hex digits".into()));
        }
        return (0..hex.len())
            .step_by(2)
            .map(|i| {
                u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| {
                    Error::InvalidPattern(format!("bad hex digits {:?}", &hex[i..i + 2]))
                })
            })
            .collect();
    }
    let bytes = arg.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'\\' {
            out.push(bytes[i]);
            i += 1;
            continue;
        }
        match bytes.get(i + 1) {
            Some(b'\\') => out.push(b'\\'),
            Some(b'n') => out.push(b'\n'),
            Some(b't') => out.push(b'\t'),
            Some(b'x') => {
                let hex = bytes
                    .get(i + 2..i + 4)
                    .and_then(|h| std::str::from_utf8(h).ok())
                    .and_then(|h| u8::from_str_radix(h, 16).ok())
                    .ok_or_else(|| Error::InvalidPattern("\\x needs two hex digits".into()))?;
                out.push(hex);
                i += 2;
            }
            _ => return Err(Error::InvalidPattern(format!("unknown escape at byte {i}"))),
        }
        i += 2;
    }
    Ok(out)
}

/// Encodes a pattern argument for `idx`. `None` means it cannot occur
/// (a token outside the vocabulary).
pub fn encode(idx: &TextIndex, arg: &str) -> Result<Option<Vec<u32>>> {
    match idx.meta().mode {
        IngestMode::Tokens => idx.encode_tokens(arg),
        IngestMode::Bytes => idx.encode_bytes(&parse_bytes(arg)?).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes() {
        assert_eq!(parse_bytes("ab").unwrap(), b"ab");
        assert_eq!(parse_bytes("a\\x00b").unwrap(), b"a\0b");
        assert_eq!(parse_bytes("\\\\x").unwrap(), b"\\x");
        assert_eq!(parse_bytes("\\n\\t").unwrap(), b"\n\t");
        assert_eq!(parse_bytes("hex:00ff41").unwrap(), vec![0, 255, 0x41]);
        assert_eq!(parse_bytes("").unwrap(), b"");
        assert!(parse_bytes("hex:0").is_err());
        assert!(parse_bytes("hex:zz").is_err());
        assert!(parse_bytes("\\q").is_err());
        assert!(parse_bytes("\\x4").is_err());
        assert!(parse_bytes("a\\").is_err());
    }
}
