//! Binary file format.
//!
//! Little-endian header of 16 bytes: magic `OHRM`, version `u32`, format tag
//! `u8`, qubit count `u8`, tile exponent `u8` (0 unless tiled) and five zero
//! bytes. The payload follows as `(re, im)` binary64 pairs in storage order.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::{Format, MatrixHandle};
use crate::error::{Error, Result};

pub const FILE_MAGIC: [u8; 4] = *b"OHRM";
pub const FILE_VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

pub fn save(h: &MatrixHandle, mut out: impl Write) -> Result<()> {
    let mut header = [0u8; HEADER_LEN];
    header[..4].copy_from_slice(&FILE_MAGIC);
    header[4..8].copy_from_slice(&FILE_VERSION.to_le_bytes());
    header[8] = h.format() as u8;
    header[9] = h.qubits() as u8;
    header[10] = h.tile_exp() as u8;
    out.write_all(&header)?;

    let data = h.as_slice();
    let mut payload = Vec::with_capacity(data.len() * 16);
    for z in data {
        payload.extend_from_slice(&z.re.to_le_bytes());
        payload.extend_from_slice(&z.im.to_le_bytes());
    }
    out.write_all(&payload)?;
    Ok(())
}

pub fn load(mut input: impl Read) -> Result<MatrixHandle> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && bytes[..4] != FILE_MAGIC {
            return Err(Error::BadMagic(bytes[..4].try_into().unwrap()));
        }
        return Err(Error::MalformedHeader("file shorter than the 16-byte header"));
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if magic != FILE_MAGIC {
        return Err(Error::BadMagic(magic));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != FILE_VERSION {
        return Err(Error::VersionMismatch(version));
    }
    let format = match bytes[8] {
        0 => Format::Dense,
        1 => Format::Packed,
        2 => Format::Tiled,
        tag => return Err(Error::UnknownFormatTag(tag)),
    };
    let n = bytes[9] as usize;
    let m = bytes[10] as u32;
    if format != Format::Tiled && m != 0 {
        return Err(Error::MalformedHeader("non-tiled format with nonzero tile exponent"));
    }
    if bytes[11..HEADER_LEN].iter().any(|&b| b != 0) {
        return Err(Error::MalformedHeader("reserved bytes are not zero"));
    }

    let mut h = MatrixHandle::zeros(n, format, m)?;
    let payload = &bytes[HEADER_LEN..];
    let expected = h.as_slice().len() * 16;
    if payload.len() < expected {
        return Err(Error::Truncated {
            expected,
            actual: payload.len(),
        });
    }
    if payload.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: payload.len(),
        });
    }
    for (z, chunk) in h.storage_mut().as_mut_slice().iter_mut().zip(payload.chunks_exact(16)) {
        let re = f64::from_le_bytes(chunk[..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..].try_into().unwrap());
        *z = Complex64::new(re, im);
    }
    Ok(h)
}
