//! Seeded piecewise scenes for tests, demos and the CLI `synth` command.
//!
//! The image is split into `regions` convex cells around random seeds. Cell
//! `k` has a signature spectrum `m_k` and two zero-mean variation spectra
//! `u_k`, `v_k`; every pixel in it is `m_k + a·u_k + b·v_k` where `a`, `b`
//! are smooth random fields over the image, so the clean covariance of a
//! cell has rank two. Signatures share a common base shape, differ in shape
//! by `contrast` and sit at evenly spaced brightness levels `brightness`
//! apart in total. Strong variation can push a few samples below zero.
//! White Gaussian noise is added on top.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::LabelMap;
use crate::cube::{add_awgn, HsiCube};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub rows: usize,
    pub cols: usize,
    pub bands: usize,
    pub regions: usize,
    /// Weight of the per-class part of each signature shape, in `[0, 1]`.
    pub contrast: f64,
    /// Spread of signature brightness levels, in `[0, 1)`: levels run
    /// evenly from `1` down to `1 - brightness` in random order.
    pub brightness: f64,
    /// `a` is drawn from `±variation`.
    pub variation: f64,
    /// `b` is drawn from `±mixing`.
    pub mixing: f64,
    /// Noise standard deviation as a fraction of the clean-signal RMS.
    pub noise_fraction: f64,
    /// Spectra peak near this value, giving reflectance-like magnitudes.
    pub scale: f64,
    pub seed: u64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            rows: 48,
            cols: 48,
            bands: 20,
            regions: 4,
            contrast: 0.1,
            brightness: 0.2,
            variation: 0.3,
            mixing: 0.3,
            noise_fraction: 0.05,
            scale: 4000.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub cube: HsiCube<f64>,
    /// Noise-free cube.
    pub clean: HsiCube<f64>,
    /// Region of every pixel as class ids `1..=regions`.
    pub truth: LabelMap,
    /// Noise standard deviation actually applied.
    pub noise_sigma: f64,
}

pub fn generate(config: &SceneConfig) -> Result<Scene> {
    let SceneConfig {
        rows,
        cols,
        bands,
        regions,
        ..
    } = *config;
    if rows == 0 || cols == 0 || bands == 0 {
        return Err(Error::param("scene dimensions must be positive"));
    }
    if regions == 0 || regions > rows * cols {
        return Err(Error::param(format!(
            "region count must be in 1..={}, got {regions}",
            rows * cols
        )));
    }
    if !(config.noise_fraction >= 0.0 && config.scale > 0.0) {
        return Err(Error::param("noise fraction must be non-negative and scale positive"));
    }
    if !(0.0..=1.0).contains(&config.contrast)
        || !(0.0..1.0).contains(&config.brightness)
        || !(config.variation >= 0.0 && config.mixing >= 0.0)
    {
        return Err(Error::param(
            "contrast must be in [0, 1], brightness in [0, 1), variation and mixing non-negative",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let truth = voronoi_layout(rows, cols, regions, &mut rng)?;
    let shared = smooth_spectrum(bands, &mut rng);
    let mut levels: Vec<f64> = (0..regions)
        .map(|k| 1.0 - config.brightness * k as f64 / (regions.max(2) - 1) as f64)
        .collect();
    levels.shuffle(&mut rng);
    let spectra: Vec<[Vec<f64>; 3]> = levels
        .iter()
        .map(|&level| {
            let own = smooth_spectrum(bands, &mut rng);
            let signature = shared
                .iter()
                .zip(&own)
                .map(|(s, o)| level * ((1.0 - config.contrast) * s + config.contrast * o))
                .collect();
            [signature, zero_mean_shape(bands, &mut rng), zero_mean_shape(bands, &mut rng)]
        })
        .collect();

    let pixels = rows * cols;
    let field_a = smooth_field(rows, cols, &mut rng);
    let field_b = smooth_field(rows, cols, &mut rng);
    let mut data = vec![0.0; pixels * bands];
    for (i, &label) in truth.labels().iter().enumerate() {
        let [m, u, v] = &spectra[label as usize - 1];
        let (a, b) = (config.variation * field_a[i], config.mixing * field_b[i]);
        for k in 0..bands {
            data[k * pixels + i] = config.scale * (m[k] + a * u[k] + b * v[k]);
        }
    }
    let rms = (data.iter().map(|x| x * x).sum::<f64>() / data.len() as f64).sqrt();
    let clean = HsiCube::new(rows, cols, bands, data)?;
    let noise_sigma = config.noise_fraction * rms;
    let cube = add_awgn(&clean, noise_sigma, rng.random())?;
    Ok(Scene {
        cube,
        clean,
        truth,
        noise_sigma,
    })
}

/// Nearest-seed cells around `regions` random seeds kept at least
/// `0.6·√(area / regions)` apart; labels `1..=regions`. Cells are convex, so
/// only degenerate slivers can break 4-connectivity, and those are redrawn.
fn voronoi_layout(rows: usize, cols: usize, regions: usize, rng: &mut ChaCha8Rng) -> Result<LabelMap> {
    let min_gap = 0.6 * ((rows * cols) as f64 / regions as f64).sqrt();
    for _ in 0..256 {
        let mut seeds: Vec<(f64, f64)> = Vec::with_capacity(regions);
        for _ in 0..regions * 64 {
            if seeds.len() == regions {
                break;
            }
            let cand = (
                rng.random_range(0.0..rows as f64),
                rng.random_range(0.0..cols as f64),
            );
            if seeds
                .iter()
                .all(|&(r, c)| (r - cand.0).hypot(c - cand.1) >= min_gap)
            {
                seeds.push(cand);
            }
        }
        if seeds.len() < regions {
            continue;
        }
        let labels: Vec<u32> = (0..rows * cols)
            .map(|i| {
                let (r, c) = ((i / cols) as f64 + 0.5, (i % cols) as f64 + 0.5);
                let nearest = seeds
                    .iter()
                    .enumerate()
                    .map(|(k, &(sr, sc))| (k, (r - sr).powi(2) + (c - sc).powi(2)))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .map_or(0, |(k, _)| k);
                nearest as u32 + 1
            })
            .collect();
        let raw: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
        let map = crate::segmentation::RegionMap::from_raw_labels(rows, cols, &raw, false)?;
        if map.region_count() == regions && map.regions_are_connected() {
            return LabelMap::new(rows, cols, labels);
        }
    }
    Err(Error::param(format!(
        "could not lay out {regions} connected regions on a {rows}x{cols} image"
    )))
}

/// Sum of a few low-frequency plane waves, rescaled to span `[-1, 1]`.
fn smooth_field(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let waves: Vec<(f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.random_range(-2.0..=2.0),
                rng.random_range(-2.0..=2.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let raw: Vec<f64> = (0..rows * cols)
        .map(|i| {
            let (y, x) = ((i / cols) as f64 / rows as f64, (i % cols) as f64 / cols as f64);
            waves
                .iter()
                .map(|&(fy, fx, phase)| (std::f64::consts::TAU * (fy * y + fx * x) + phase).cos())
                .sum()
        })
        .collect();
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    raw.into_iter().map(|v| 2.0 * (v - lo) / span - 1.0).collect()
}

/// A smooth spectrum minus its mean, scaled to peak magnitude 1.
fn zero_mean_shape(bands: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw = smooth_spectrum(bands, rng);
    let mean = raw.iter().sum::<f64>() / bands as f64;
    let centered: Vec<f64> = raw.into_iter().map(|x| x - mean).collect();
    let peak = centered.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak > 0.0 {
        centered.into_iter().map(|x| x / peak).collect()
    } else {
        centered
    }
}

/// Baseline plus three Gaussian bumps, normalized to peak 1.
fn smooth_spectrum(bands: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let base = rng.random_range(0.1..0.4);
    let bumps: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.random_range(0.2..1.0),
                rng.random_range(0.0..1.0),
                rng.random_range(0.08..0.3),
            )
        })
        .collect();
    let raw: Vec<f64> = (0..bands)
        .map(|k| {
            let t = if bands > 1 { k as f64 / (bands - 1) as f64 } else { 0.5 };
            base + bumps
                .iter()
                .map(|&(h, mu, w)| h * (-(t - mu).powi(2) / (2.0 * w * w)).exp())
                .sum::<f64>()
        })
        .collect();
    let peak = raw.iter().copied().fold(f64::MIN, f64::max);
    raw.into_iter().map(|x| x / peak).collect()
}
