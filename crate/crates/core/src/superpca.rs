//! Region-wise PCA: one independent basis per region, reassembled into a
//! single reduced cube. Global PCA, square tiles and spectral clusters are
//! the same reduction over different region maps.
//!
//! Reduced channels are **not** aligned across regions: channel `j` of a
//! pixel is the `j`-th principal component of *its own* region.

use rayon::prelude::*;

use crate::cube::{self, HsiCube};
use crate::error::{Error, Result};
use crate::linalg::{self, covariance, eigen_ratio, fit_pca, sym_eigen};
use crate::scalar::Scalar;
use crate::segmentation::{
    build_graph, ers_segment, kmeans_cluster, square_partition, Alpha, GraphSigma, RegionMap,
};

/// Reduced dimension used when the caller has no better choice.
pub const DEFAULT_DIM: usize = 30;
pub const KMEANS_MAX_ITER: usize = 100;

/// How a region map was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    SuperPca,
    Global,
    Square,
    Cluster,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::SuperPca => "superpca",
            Method::Global => "global",
            Method::Square => "square",
            Method::Cluster => "cluster",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "superpca" => Ok(Method::SuperPca),
            "global" => Ok(Method::Global),
            "square" => Ok(Method::Square),
            "cluster" => Ok(Method::Cluster),
            other => Err(Error::param(format!(
                "unknown reduction method '{other}' (expected superpca, global, square or cluster)"
            ))),
        }
    }
}

/// Where the per-region projection is anchored.
///
/// Bases are always fitted on region-centered data; this only decides what
/// the fitted directions are applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Centering {
    /// `y = Wᵀ x`: the region's mean spectrum stays in the features, so
    /// regions remain distinguishable to a classifier.
    #[default]
    Origin,
    /// `y = Wᵀ (x - μ_k)`: zero-mean features inside every region.
    RegionMean,
}

/// A reduced cube together with the map and settings that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCube<T> {
    cube: HsiCube<T>,
    map: RegionMap,
    method: Method,
    centering: Centering,
}

impl<T: Scalar> ReducedCube<T> {
    pub fn cube(&self) -> &HsiCube<T> {
        &self.cube
    }

    pub fn into_cube(self) -> HsiCube<T> {
        self.cube
    }

    pub fn region_map(&self) -> &RegionMap {
        &self.map
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }

    /// Number of reduced channels `d`.
    pub fn channels(&self) -> usize {
        self.cube.bands()
    }

    /// Retags the provenance (same data).
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

/// Fits a PCA inside every region and writes each region's projection
/// into the shared output, zero-padding regions that support fewer than
/// `d` components (`d_k = min(d, n_k, L)`).
pub fn superpca_reduce<T: Scalar>(
    cube: &HsiCube<T>,
    map: &RegionMap,
    d: usize,
) -> Result<ReducedCube<T>> {
    superpca_reduce_with(cube, map, d, Centering::default())
}

pub fn superpca_reduce_with<T: Scalar>(
    cube: &HsiCube<T>,
    map: &RegionMap,
    d: usize,
    centering: Centering,
) -> Result<ReducedCube<T>> {
    if map.rows() != cube.rows() || map.cols() != cube.cols() {
        return Err(Error::contract(format!(
            "region map is {}x{} but cube is {}x{}",
            map.rows(),
            map.cols(),
            cube.rows(),
            cube.cols()
        )));
    }
    let l = cube.bands();
    if d == 0 || d > l {
        return Err(Error::param(format!(
            "reduced dimension must be in 1..={l}, got {d}"
        )));
    }
    let pixels = cube.to_pixel_matrix();
    let regions = map.regions();

    let reduced: Vec<(Vec<usize>, Vec<T>)> = regions
        .into_par_iter()
        .map(|members| -> Result<_> {
            let local = pixels.select(&members);
            let dk = d.min(members.len()).min(l);
            let basis = fit_pca(&local, dk)?;
            let y = match centering {
                Centering::Origin => linalg::project_uncentered(&basis, &local)?,
                Centering::RegionMean => linalg::project(&basis, &local)?,
            };
            let mut padded = vec![T::zero(); members.len() * d];
            for (i, col) in y.columns().enumerate() {
                padded[i * d..i * d + dk].copy_from_slice(col);
            }
            Ok((members, padded))
        })
        .collect::<Result<_>>()?;

    let p = cube.pixels();
    let mut data = vec![T::zero(); p * d];
    for (members, values) in &reduced {
        for (i, &pixel) in members.iter().enumerate() {
            for ch in 0..d {
                data[ch * p + pixel] = values[i * d + ch];
            }
        }
    }
    let method = if map.region_count() == 1 {
        Method::Global
    } else {
        Method::SuperPca
    };
    Ok(ReducedCube {
        cube: HsiCube::new(cube.rows(), cube.cols(), d, data)?,
        map: map.clone(),
        method,
        centering,
    })
}

/// One basis fitted on all pixels.
pub fn global_pca_reduce<T: Scalar>(cube: &HsiCube<T>, d: usize) -> Result<ReducedCube<T>> {
    global_pca_reduce_with(cube, d, Centering::default())
}

pub fn global_pca_reduce_with<T: Scalar>(
    cube: &HsiCube<T>,
    d: usize,
    centering: Centering,
) -> Result<ReducedCube<T>> {
    let map = RegionMap::single(cube.rows(), cube.cols());
    Ok(superpca_reduce_with(cube, &map, d, centering)?.with_method(Method::Global))
}

/// Settings for the one-call reductions in [`reduce`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReduceConfig<T> {
    pub dim: usize,
    /// Superpixel / tile / cluster count (ignored by global PCA).
    pub regions: usize,
    pub alpha: Alpha<T>,
    pub graph_sigma: GraphSigma<T>,
    pub seed: u64,
    pub centering: Centering,
}

impl<T: Scalar> ReduceConfig<T> {
    pub fn new(dim: usize, regions: usize) -> Self {
        Self {
            dim,
            regions,
            alpha: Alpha::Auto,
            graph_sigma: GraphSigma::Auto,
            seed: 0,
            centering: Centering::default(),
        }
    }
}

/// Builds the region map for `method` on `cube`.
pub fn region_map_for<T: Scalar>(
    cube: &HsiCube<T>,
    method: Method,
    config: &ReduceConfig<T>,
) -> Result<RegionMap> {
    let (rows, cols) = (cube.rows(), cube.cols());
    match method {
        Method::Global => Ok(RegionMap::single(rows, cols)),
        Method::Square => square_partition(rows, cols, config.regions),
        Method::Cluster => kmeans_cluster(
            &cube.to_pixel_matrix(),
            rows,
            cols,
            config.regions,
            config.seed,
            KMEANS_MAX_ITER,
        ),
        Method::SuperPca => {
            if config.regions == 1 || cube.pixels() < 2 {
                return Ok(RegionMap::single(rows, cols));
            }
            let guide = cube::first_pc_image(cube)?;
            let graph = build_graph(&guide, config.graph_sigma)?;
            ers_segment(&graph, config.regions, config.alpha)
        }
    }
}

/// Segments with `method` and reduces in one call.
pub fn reduce<T: Scalar>(
    cube: &HsiCube<T>,
    method: Method,
    config: &ReduceConfig<T>,
) -> Result<ReducedCube<T>> {
    let map = region_map_for(cube, method, config)?;
    Ok(superpca_reduce_with(cube, &map, config.dim, config.centering)?.with_method(method))
}

/// Per-region `λ1/λ2` next to the global one.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport<T> {
    /// `(region id, ratio)` for regions with at least two distinct pixels.
    pub regions: Vec<(usize, T)>,
    pub global: Option<T>,
    /// Mean over the regions present in `regions`.
    pub mean: Option<T>,
}

/// Eigenvalue ratio of every region's covariance. Regions with fewer than
/// two pixels or zero covariance are left out.
pub fn region_eigen_ratios<T: Scalar>(
    cube: &HsiCube<T>,
    map: &RegionMap,
) -> Result<RatioReport<T>> {
    if map.rows() != cube.rows() || map.cols() != cube.cols() {
        return Err(Error::contract("region map does not match cube"));
    }
    if cube.bands() < 2 {
        return Err(Error::param("eigen ratios need at least two bands"));
    }
    let pixels = cube.to_pixel_matrix();
    let ratio_of = |members: &[usize]| -> Result<Option<T>> {
        if members.len() < 2 {
            return Ok(None);
        }
        let spectrum = sym_eigen(&covariance(&pixels.select(members))?)?;
        if spectrum.values()[0] <= T::zero() {
            return Ok(None);
        }
        eigen_ratio(&spectrum).map(Some)
    };
    let per_region: Vec<Option<T>> = map
        .regions()
        .par_iter()
        .map(|m| ratio_of(m))
        .collect::<Result<_>>()?;
    let regions: Vec<(usize, T)> = per_region
        .into_iter()
        .enumerate()
        .filter_map(|(k, r)| r.map(|r| (k, r)))
        .collect();
    let all: Vec<usize> = (0..cube.pixels()).collect();
    let global = ratio_of(&all)?;
    let mean = (!regions.is_empty())
        .then(|| regions.iter().map(|&(_, r)| r).sum::<T>() / T::of_usize(regions.len()));
    Ok(RatioReport {
        regions,
        global,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noisy_cube(rows: usize, cols: usize, bands: usize, seed: u64) -> HsiCube<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        HsiCube::from_fn(rows, cols, bands, |_, _, _| rng.random_range(0.0..1.0)).unwrap()
    }

    /// Region 0 on the left half along direction u, region 1 along v.
    fn two_line_cube() -> (HsiCube<f64>, RegionMap) {
        let u = [1.0, 2.0, 0.5, -1.0];
        let v = [-0.5, 0.3, 2.0, 1.0];
        let (rows, cols) = (4, 6);
        let cube = HsiCube::from_fn(rows, cols, 4, |r, c, b| {
            let t = (r * cols + c) as f64 * 0.37 % 1.7;
            if c < 3 {
                3.0 + t * u[b]
            } else {
                -2.0 + t * v[b]
            }
        })
        .unwrap();
        let labels = (0..rows * cols).map(|i| usize::from(i % cols >= 3)).collect();
        (cube, RegionMap::new(rows, cols, labels, true).unwrap())
    }

    fn channel_variance(cube: &HsiCube<f64>, members: &[usize], ch: usize) -> f64 {
        let vals: Vec<f64> = members.iter().map(|&p| cube.band(ch)[p]).collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
    }

    #[test]
    fn one_region_equals_global() {
        let cube = noisy_cube(4, 5, 6, 1);
        for centering in [Centering::Origin, Centering::RegionMean] {
            let single = superpca_reduce_with(&cube, &RegionMap::single(4, 5), 3, centering).unwrap();
            let global = global_pca_reduce_with(&cube, 3, centering).unwrap();
            assert_eq!(single.cube(), global.cube());
        }
    }

    #[test]
    fn singleton_regions_reduce_to_zero_when_centered() {
        let cube = noisy_cube(3, 3, 4, 2);
        let out =
            superpca_reduce_with(&cube, &RegionMap::singletons(3, 3), 2, Centering::RegionMean)
                .unwrap();
        assert!(out.cube().data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn singleton_regions_keep_one_channel_about_origin() {
        let cube = noisy_cube(3, 3, 4, 2);
        let out = superpca_reduce(&cube, &RegionMap::singletons(3, 3), 2).unwrap();
        // zero covariance: the first basis vector is the first band
        assert_eq!(out.cube().band(0), cube.band(0));
        assert!(out.cube().band(1).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn per_region_lines_are_captured_exactly() {
        let (cube, map) = two_line_cube();
        let out = superpca_reduce(&cube, &map, 1).unwrap();
        let pixels = cube.to_pixel_matrix();
        let mut global_captured = 0.0;
        let global = fit_pca(&pixels, 1).unwrap();
        for members in map.regions() {
            let local = pixels.select(&members);
            let total = covariance(&local).unwrap().trace();
            let captured = channel_variance(out.cube(), &members, 0);
            assert!((captured - total).abs() < 1e-9);
            global_captured += global.captured_variance(&covariance(&local).unwrap());
        }
        let total: f64 = map
            .regions()
            .iter()
            .map(|m| covariance(&pixels.select(m)).unwrap().trace())
            .sum();
        assert!(global_captured < total - 1e-6);
    }

    #[test]
    fn global_reduction_reconstructs_with_full_basis() {
        let cube = noisy_cube(3, 4, 5, 3);
        let out = global_pca_reduce(&cube, 5).unwrap();
        let basis = fit_pca(&cube.to_pixel_matrix(), 5).unwrap();
        let y = out.cube().to_pixel_matrix();
        let x = cube.to_pixel_matrix();
        for i in 0..12 {
            let mut rec = vec![0.0; 5];
            for k in 0..5 {
                for b in 0..5 {
                    rec[b] += basis.direction(k)[b] * y.column(i)[k];
                }
            }
            for b in 0..5 {
                assert!((rec[b] - x.column(i)[b]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn global_matches_fit_then_project() {
        let cube = noisy_cube(3, 3, 4, 4);
        let m = cube.to_pixel_matrix();
        let basis = fit_pca(&m, 2).unwrap();
        let centered = linalg::project(&basis, &m).unwrap();
        let out = global_pca_reduce_with(&cube, 2, Centering::RegionMean).unwrap();
        let y = out.cube().to_pixel_matrix();
        for (a, b) in y.data().iter().zip(centered.data()) {
            assert!((a - b).abs() < 1e-12);
        }
        let raw = linalg::project_uncentered(&basis, &m).unwrap();
        let out = global_pca_reduce(&cube, 2).unwrap();
        for (a, b) in out.cube().to_pixel_matrix().data().iter().zip(raw.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn region_ids_do_not_matter() {
        let (cube, map) = two_line_cube();
        let flipped: Vec<usize> = map.labels().iter().map(|&l| 1 - l).collect();
        let flipped = RegionMap::new(4, 6, flipped, true).unwrap();
        let a = superpca_reduce(&cube, &map, 2).unwrap();
        let b = superpca_reduce(&cube, &flipped, 2).unwrap();
        assert_eq!(a.cube(), b.cube());
    }

    #[test]
    fn small_regions_are_zero_padded() {
        let cube = noisy_cube(1, 5, 6, 5);
        let map = RegionMap::new(1, 5, vec![0, 0, 1, 1, 1], true).unwrap();
        let out = superpca_reduce_with(&cube, &map, 4, Centering::RegionMean).unwrap();
        // region 0 has 2 pixels: channels 2.. are padding
        for ch in 2..4 {
            assert_eq!(out.cube().band(ch)[0], 0.0);
            assert_eq!(out.cube().band(ch)[1], 0.0);
        }
        assert_eq!(out.channels(), 4);
    }

    #[test]
    fn dimension_checks() {
        let cube = noisy_cube(2, 2, 3, 6);
        assert!(superpca_reduce(&cube, &RegionMap::single(2, 3), 1).is_err());
        assert!(superpca_reduce(&cube, &RegionMap::single(2, 2), 4).is_err());
        assert!(superpca_reduce(&cube, &RegionMap::single(2, 2), 0).is_err());
    }

    #[test]
    fn ratio_report_cases() {
        let cube = noisy_cube(4, 4, 3, 7);
        let single = region_eigen_ratios(&cube, &RegionMap::single(4, 4)).unwrap();
        assert_eq!(single.regions.len(), 1);
        assert_eq!(Some(single.regions[0].1), single.global);

        let twin = HsiCube::new(1, 3, 2, vec![1.0, 1.0, 5.0, 2.0, 2.0, 0.0]).unwrap();
        let map = RegionMap::new(1, 3, vec![0, 0, 1], true).unwrap();
        let report = region_eigen_ratios(&twin, &map).unwrap();
        assert!(report.regions.is_empty());
        assert!(report.mean.is_none());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::SuperPca, Method::Global, Method::Square, Method::Cluster] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("ica".parse::<Method>().is_err());
    }
}
