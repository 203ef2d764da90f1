//! Binary PPM (P6) rendering of label maps with a fixed palette.

use std::path::Path;

use super::write_bytes;
use crate::classify::LabelMap;
use crate::error::{Error, Result};

/// Entry 0 (unlabeled) is black; entries 1..=16 are class colors.
pub const PALETTE: [[u8; 3]; 17] = [
    [0, 0, 0],
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [250, 190, 212],
    [0, 128, 128],
    [220, 190, 255],
    [170, 110, 40],
    [255, 250, 200],
    [128, 0, 0],
    [170, 255, 195],
];

pub fn encode_ppm(map: &LabelMap) -> Result<Vec<u8>> {
    let classes = map.class_count();
    if classes as usize >= PALETTE.len() {
        return Err(Error::PaletteExhausted {
            classes,
            capacity: PALETTE.len() - 1,
        });
    }
    let mut out = format!("P6\n{} {}\n255\n", map.cols(), map.rows()).into_bytes();
    out.reserve(map.labels().len() * 3);
    for &l in map.labels() {
        out.extend_from_slice(&PALETTE[l as usize]);
    }
    Ok(out)
}

pub fn render_map(map: &LabelMap, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_ppm(map)?)
}
