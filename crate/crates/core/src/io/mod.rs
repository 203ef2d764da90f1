//! On-disk formats: HSIF cubes, plain-text label grids and PPM maps.

mod hsif;
mod labels;
mod ppm;

pub use hsif::{decode_hsif, encode_hsif, read_hsif, write_hsif, HsifHeader};
pub use labels::{format_labels, parse_labels, read_labels, write_labels};
pub use ppm::{encode_ppm, render_map, PALETTE};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
