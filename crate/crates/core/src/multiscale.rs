//! Multiscale SuperPCA: `2C + 1` superpixel counts around a fundamental
//! count `S_f`, one segmentation and reduction per count.

use rayon::prelude::*;

use crate::classify::LabelMap;
use crate::cube::{self, HsiCube};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::segmentation::{build_graph, ers_segment, Alpha, GraphSigma, RegionMap};
use crate::superpca::{superpca_reduce_with, Centering, ReducedCube};

/// Superpixel counts `S_c = min(max(1, round(√2^c · S_f)), P)` for
/// `c = -C..=C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleSchedule {
    fundamental: usize,
    half_width: usize,
    pixels: usize,
    counts: Vec<usize>,
}

impl ScaleSchedule {
    pub fn fundamental(&self) -> usize {
        self.fundamental
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn pixels(&self) -> usize {
        self.pixels
    }

    /// Counts ordered from `c = -C` to `c = C`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn scale_schedule(fundamental: usize, half_width: usize, pixels: usize) -> Result<ScaleSchedule> {
    if fundamental == 0 {
        return Err(Error::param("fundamental superpixel count must be at least 1"));
    }
    if pixels == 0 {
        return Err(Error::param("pixel count must be at least 1"));
    }
    let c = i32::try_from(half_width)
        .map_err(|_| Error::param(format!("scale half-width {half_width} is too large")))?;
    let counts = (-c..=c)
        .map(|k| {
            // f64::round is round-half-away-from-zero
            let raw = (std::f64::consts::SQRT_2.powi(k) * fundamental as f64).round();
            (raw.max(1.0) as usize).min(pixels)
        })
        .collect();
    Ok(ScaleSchedule {
        fundamental,
        half_width,
        pixels,
        counts,
    })
}

/// Per-scale artifacts of one multiscale run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleEnsemble<T> {
    pub schedule: ScaleSchedule,
    pub maps: Vec<RegionMap>,
    pub reduced: Vec<ReducedCube<T>>,
    /// Filled in by classification, one map per scale.
    pub predictions: Vec<LabelMap>,
}

impl<T: Scalar> ScaleEnsemble<T> {
    pub fn len(&self) -> usize {
        self.reduced.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reduced.is_empty()
    }
}

/// Segments the shared guide image at every scheduled count and reduces
/// each segmentation with SuperPCA.
pub fn run_multiscale<T: Scalar>(
    cube: &HsiCube<T>,
    schedule: &ScaleSchedule,
    d: usize,
    alpha: Alpha<T>,
) -> Result<ScaleEnsemble<T>> {
    run_multiscale_with(cube, schedule, d, alpha, Centering::default())
}

pub fn run_multiscale_with<T: Scalar>(
    cube: &HsiCube<T>,
    schedule: &ScaleSchedule,
    d: usize,
    alpha: Alpha<T>,
    centering: Centering,
) -> Result<ScaleEnsemble<T>> {
    if schedule.pixels() != cube.pixels() {
        return Err(Error::contract(format!(
            "schedule was built for {} pixels, cube has {}",
            schedule.pixels(),
            cube.pixels()
        )));
    }
    let (rows, cols) = (cube.rows(), cube.cols());
    let graph = if cube.pixels() >= 2 {
        let guide = cube::first_pc_image(cube)?;
        Some(build_graph(&guide, GraphSigma::Auto)?)
    } else {
        None
    };

    let per_scale: Vec<(RegionMap, ReducedCube<T>)> = schedule
        .counts()
        .par_iter()
        .map(|&s| -> Result<_> {
            let map = match &graph {
                Some(g) => ers_segment(g, s, alpha)?,
                None => RegionMap::single(rows, cols),
            };
            let reduced = superpca_reduce_with(cube, &map, d, centering)?;
            Ok((map, reduced))
        })
        .collect::<Result<_>>()?;

    let (maps, reduced) = per_scale.into_iter().unzip();
    Ok(ScaleEnsemble {
        schedule: schedule.clone(),
        maps,
        reduced,
        predictions: Vec::new(),
    })
}
