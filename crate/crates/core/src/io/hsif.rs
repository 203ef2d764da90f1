//! HSIF: a one-line UTF-8 JSON header
//! (`rows`, `cols`, `bands`, `dtype: "f32"`, `interleave: "bsq"`,
//! `byteorder: "le"`) terminated by `\n`, followed by
//! `rows·cols·bands` little-endian `f32` samples in band-sequential order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_bytes, write_bytes};
use crate::cube::HsiCube;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HsifHeader {
    pub rows: usize,
    pub cols: usize,
    pub bands: usize,
    pub dtype: String,
    pub interleave: String,
    pub byteorder: String,
}

impl HsifHeader {
    pub fn new(rows: usize, cols: usize, bands: usize) -> Self {
        Self {
            rows,
            cols,
            bands,
            dtype: "f32".into(),
            interleave: "bsq".into(),
            byteorder: "le".into(),
        }
    }

    fn check_supported(&self) -> Result<()> {
        let fields = [
            ("dtype", &self.dtype, "f32"),
            ("interleave", &self.interleave, "bsq"),
            ("byteorder", &self.byteorder, "le"),
        ];
        for (name, got, want) in fields {
            if got != want {
                return Err(Error::Unsupported(format!(
                    "{name} '{got}' (only '{want}' is supported)"
                )));
            }
        }
        Ok(())
    }
}

pub fn encode_hsif<T: Scalar>(cube: &HsiCube<T>) -> Vec<u8> {
    let header = HsifHeader::new(cube.rows(), cube.cols(), cube.bands());
    let mut out = serde_json::to_vec(&header).expect("header serializes");
    out.push(b'\n');
    out.reserve(cube.data().len() * 4);
    for v in cube.data() {
        out.extend_from_slice(&(v.to_f64_lossy() as f32).to_le_bytes());
    }
    out
}

pub fn decode_hsif<T: Scalar>(bytes: &[u8]) -> Result<HsiCube<T>> {
    let newline = bytes.iter().position(|&b| b == b'\n').ok_or(Error::Format {
        offset: bytes.len() as u64,
        message: "header is not terminated by a newline".into(),
    })?;
    let header: HsifHeader =
        serde_json::from_slice(&bytes[..newline]).map_err(|e| Error::Format {
            offset: e.column().saturating_sub(1) as u64,
            message: format!("malformed header: {e}"),
        })?;
    header.check_supported()?;
    if header.rows == 0 || header.cols == 0 || header.bands == 0 {
        return Err(Error::Format {
            offset: 0,
            message: format!(
                "header dimensions must be positive, got {}x{}x{}",
                header.rows, header.cols, header.bands
            ),
        });
    }

    let start = newline + 1;
    let samples = header
        .rows
        .checked_mul(header.cols)
        .and_then(|n| n.checked_mul(header.bands))
        .ok_or(Error::Format {
            offset: 0,
            message: "header dimensions overflow".into(),
        })?;
    let expected = samples * 4;
    let payload = &bytes[start..];
    if payload.len() < expected {
        return Err(Error::Format {
            offset: bytes.len() as u64,
            message: format!(
                "payload truncated: expected {expected} bytes after the header, found {}",
                payload.len()
            ),
        });
    }
    if payload.len() > expected {
        return Err(Error::Format {
            offset: (start + expected) as u64,
            message: format!("{} trailing bytes after payload", payload.len() - expected),
        });
    }
    let mut data = Vec::with_capacity(samples);
    for (k, chunk) in payload.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().expect("4-byte chunk"));
        if !v.is_finite() {
            return Err(Error::Format {
                offset: (start + 4 * k) as u64,
                message: format!("non-finite sample {v}"),
            });
        }
        data.push(T::of(f64::from(v)));
    }
    HsiCube::new(header.rows, header.cols, header.bands, data)
}

pub fn read_hsif<T: Scalar>(path: impl AsRef<Path>) -> Result<HsiCube<T>> {
    decode_hsif(&read_bytes(path.as_ref())?)
}

pub fn write_hsif<T: Scalar>(cube: &HsiCube<T>, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_hsif(cube))
}
