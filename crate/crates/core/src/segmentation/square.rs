use super::RegionMap;
use crate::error::{Error, Result};

/// Tiles an `rows × cols` image with axis-aligned rectangles, aiming for
/// `target` regions.
///
/// Rows are split into `r = round(√(S·M/N))` bands (at most `S`) and
/// columns into `⌈S/r⌉` bands, each clamped to the image size. The actual
/// region count `r · c` is reported by the returned map.
pub fn square_partition(rows: usize, cols: usize, target: usize) -> Result<RegionMap> {
    let p = rows * cols;
    if target == 0 || target > p {
        return Err(Error::param(format!(
            "square region count must be in 1..={p}, got {target}"
        )));
    }
    let row_bands = ((target as f64 * rows as f64 / cols as f64).sqrt().round() as usize).clamp(1, rows.min(target));
    let col_bands = target.div_ceil(row_bands).clamp(1, cols);
    let row_band_of = |r: usize| (r * row_bands) / rows;
    let col_band_of = |c: usize| (c * col_bands) / cols;
    let labels = (0..p)
        .map(|i| row_band_of(i / cols) * col_bands + col_band_of(i % cols))
        .collect();
    RegionMap::new(rows, cols, labels, true)
}
