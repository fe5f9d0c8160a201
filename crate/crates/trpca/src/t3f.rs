//! The T3F1 binary tensor format.
//!
//! ```text
//! b"T3F1" | n1: u32 LE | n2: u32 LE | n3: u32 LE | n1·n2·n3 × f64 LE
//! ```
//!
//! Values follow the in-memory layout of [`Tensor3`]: frontal slice
//! slowest, then row, then column.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use trpca_core::Tensor3;

use crate::error::{FormatError, Result};

pub const MAGIC: &[u8; 4] = b"T3F1";
const HEADER_LEN: usize = 16;

pub fn encode(a: &Tensor3) -> Result<Vec<u8>> {
    let (n1, n2, n3) = a.dims();
    let dim = |n: usize| {
        u32::try_from(n).map_err(|_| FormatError::DimensionOverflow {
            n1: n1 as u64,
            n2: n2 as u64,
            n3: n3 as u64,
        })
    };
    let dims = [dim(n1)?, dim(n2)?, dim(n3)?];
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * a.len());
    out.extend_from_slice(MAGIC);
    for d in dims {
        out.extend_from_slice(&d.to_le_bytes());
    }
    for v in a.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode(bytes: &[u8]) -> Result<Tensor3> {
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(FormatError::BadMagic(bytes[..4].try_into().unwrap()));
        }
        return Err(FormatError::Truncated { expected: HEADER_LEN, found: bytes.len() });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if &magic != MAGIC {
        return Err(FormatError::BadMagic(magic));
    }
    let dim = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as u64;
    let (n1, n2, n3) = (dim(4), dim(8), dim(12));
    let payload = n1
        .checked_mul(n2)
        .and_then(|v| v.checked_mul(n3))
        .and_then(|v| v.checked_mul(8))
        .and_then(|v| usize::try_from(v).ok())
        .and_then(|v| v.checked_add(HEADER_LEN))
        .ok_or(FormatError::DimensionOverflow { n1, n2, n3 })?;
    if bytes.len() < payload {
        return Err(FormatError::Truncated { expected: payload, found: bytes.len() });
    }
    if bytes.len() > payload {
        return Err(FormatError::TrailingBytes { extra: bytes.len() - payload });
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Tensor3::new(n1 as usize, n2 as usize, n3 as usize, data)?)
}

pub fn write_tensor_to<W: Write>(mut w: W, a: &Tensor3) -> Result<()> {
    w.write_all(&encode(a)?)?;
    Ok(())
}

pub fn read_tensor_from<R: Read>(mut r: R) -> Result<Tensor3> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode(&bytes)
}

pub fn write_tensor(path: impl AsRef<Path>, a: &Tensor3) -> Result<()> {
    fs::write(path, encode(a)?)?;
    Ok(())
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    decode(&fs::read(path)?)
}
