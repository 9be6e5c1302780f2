//! Binary cube container: one ASCII header line `HSCUBE1 <width> <height>
//! <channels>\n` followed by `8·L·N` bytes of little-endian `f64`,
//! pixel-major (all channels of pixel 0, then pixel 1, ...).

use std::fs;
use std::path::Path;

use dgsnmf_core::{HyperCube, Matrix};

use crate::error::{Error, Result};

pub const MAGIC: &str = "HSCUBE1";
const MAX_HEADER: usize = 256;

pub fn encode_cube(cube: &HyperCube) -> Vec<u8> {
    let header = format!("{MAGIC} {} {} {}\n", cube.width(), cube.height(), cube.channels());
    let payload = cube.data().as_slice();
    let mut out = Vec::with_capacity(header.len() + 8 * payload.len());
    out.extend_from_slice(header.as_bytes());
    for v in payload {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_cube(bytes: &[u8]) -> Result<HyperCube> {
    let end = bytes
        .iter()
        .take(MAX_HEADER)
        .position(|&b| b == b'\n')
        .ok_or_else(|| {
            let head = String::from_utf8_lossy(&bytes[..bytes.len().min(MAGIC.len())]).into_owned();
            if head == MAGIC {
                Error::BadHeader("no newline-terminated header line".into())
            } else {
                Error::BadMagic(head)
            }
        })?;
    let header = std::str::from_utf8(&bytes[..end]).map_err(|_| Error::BadHeader("header is not UTF-8".into()))?;
    let mut fields = header.split_ascii_whitespace();
    let magic = fields.next().unwrap_or("");
    if magic != MAGIC {
        return Err(Error::BadMagic(magic.to_string()));
    }
    let mut dim = |name: &str| -> Result<usize> {
        let field = fields.next().ok_or_else(|| Error::BadHeader(format!("missing {name}")))?;
        field
            .parse::<usize>()
            .map_err(|_| Error::BadHeader(format!("{name} {field:?} is not a nonnegative integer")))
    };
    let (width, height, channels) = (dim("width")?, dim("height")?, dim("channels")?);
    if fields.next().is_some() {
        return Err(Error::BadHeader("extra header fields".into()));
    }
    let count = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::BadHeader("dimensions overflow".into()))?;
    let expected = count
        .checked_mul(8)
        .ok_or_else(|| Error::BadHeader("dimensions overflow".into()))?;
    let payload = &bytes[end + 1..];
    if payload.len() < expected {
        return Err(Error::TruncatedPayload {
            expected,
            found: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(Error::TrailingData {
            extra: payload.len() - expected,
        });
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    let data = Matrix::from_column_major(channels, width * height, values)?;
    Ok(HyperCube::new(data, width, height)?)
}

pub fn write_cube(cube: &HyperCube, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_cube(cube)).map_err(|e| Error::io(path, e))
}

/// Reads and validates a cube.
pub fn read_cube(path: impl AsRef<Path>) -> Result<HyperCube> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_cube(&bytes)
}
