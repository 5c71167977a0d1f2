//! Little-endian primitives shared by every serializable structure.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};

pub(crate) fn write_u32s<W: Write>(w: &mut W, xs: &[u32]) -> Result<()> {
    w.write_u64::<LittleEndian>(xs.len() as u64)?;
    let mut buf = Vec::with_capacity(xs.len() * 4);
    for &x in xs {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub(crate) fn write_u64s<W: Write>(w: &mut W, xs: &[u64]) -> Result<()> {
    w.write_u64::<LittleEndian>(xs.len() as u64)?;
    let mut buf = Vec::with_capacity(xs.len() * 8);
    for &x in xs {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub(crate) fn write_u16s<W: Write>(w: &mut W, xs: &[u16]) -> Result<()> {
    w.write_u64::<LittleEndian>(xs.len() as u64)?;
    let mut buf = Vec::with_capacity(xs.len() * 2);
    for &x in xs {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_len<R: Read>(r: &mut R, elem: usize, limit: usize) -> Result<usize> {
    let len = r.read_u64::<LittleEndian>()? as usize;
    if len.checked_mul(elem).is_none_or(|b| b > limit) {
        return Err(Error::Format(format!(
            "array length {len} exceeds section size"
        )));
    }
    Ok(len)
}

pub(crate) fn read_u32s<R: Read>(r: &mut R, limit: usize) -> Result<Vec<u32>> {
    let len = read_len(r, 4, limit)?;
    let mut out = vec![0u32; len];
    r.read_u32_into::<LittleEndian>(&mut out)?;
    Ok(out)
}

pub(crate) fn read_u64s<R: Read>(r: &mut R, limit: usize) -> Result<Vec<u64>> {
    let len = read_len(r, 8, limit)?;
    let mut out = vec![0u64; len];
    r.read_u64_into::<LittleEndian>(&mut out)?;
    Ok(out)
}

pub(crate) fn read_u16s<R: Read>(r: &mut R, limit: usize) -> Result<Vec<u16>> {
    let len = read_len(r, 2, limit)?;
    let mut out = vec![0u16; len];
    r.read_u16_into::<LittleEndian>(&mut out)?;
    Ok(out)
}

pub(crate) fn write_strings<W: Write>(w: &mut W, xs: &[String]) -> Result<()> {
    w.write_u64::<LittleEndian>(xs.len() as u64)?;
    for s in xs {
        w.write_u32::<LittleEndian>(s.len() as u32)?;
        w.write_all(s.as_bytes())?;
    }
    Ok(())
}

pub(crate) fn read_strings<R: Read>(r: &mut R, limit: usize) -> Result<Vec<String>> {
    let len = read_len(r, 4, limit)?;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let l = r.read_u32::<LittleEndian>()? as usize;
        if l > limit {
            return Err(Error::Format("string longer than its section".into()));
        }
        let mut buf = vec![0u8; l];
        r.read_exact(&mut buf)?;
        out.push(String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))?);
    }
    Ok(out)
}
