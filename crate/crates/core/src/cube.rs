//! Hyperspectral cube data model, cube/matrix reshaping, spectral-similarity
//! smoothing, noise injection and the first-principal-component guide image.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// A `rows × cols × bands` hyperspectral cube stored band-sequentially:
/// `data[band * rows * cols + row * cols + col]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HsiCube<T> {
    rows: usize,
    cols: usize,
    bands: usize,
    data: Vec<T>,
}

impl<T: Scalar> HsiCube<T> {
    /// Wraps band-sequential data, checking shape and finiteness.
    pub fn new(rows: usize, cols: usize, bands: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || bands == 0 {
            return Err(Error::param(format!(
                "cube dimensions must be positive, got {rows}x{cols}x{bands}"
            )));
        }
        let expected = rows * cols * bands;
        if data.len() != expected {
            return Err(Error::contract(format!(
                "cube {rows}x{cols}x{bands} needs {expected} samples, got {}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::contract(format!("non-finite sample at index {pos}")));
        }
        Ok(Self {
            rows,
            cols,
            bands,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize, bands: usize) -> Result<Self> {
        Self::new(rows, cols, bands, vec![T::zero(); rows * cols * bands])
    }

    /// Builds a cube from a closure over `(row, col, band)`.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        bands: usize,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols * bands);
        for b in 0..bands {
            for r in 0..rows {
                for c in 0..cols {
                    data.push(f(r, c, b));
                }
            }
        }
        Self::new(rows, cols, bands, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    /// Number of pixels, `rows * cols`.
    pub fn pixels(&self) -> usize {
        self.rows * self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, band: usize) -> T {
        self.data[band * self.pixels() + row * self.cols + col]
    }

    /// One full band as a row-major image.
    pub fn band(&self, band: usize) -> &[T] {
        let p = self.pixels();
        &self.data[band * p..(band + 1) * p]
    }

    /// Spectrum of the pixel with flat index `pixel`.
    pub fn spectrum(&self, pixel: usize) -> Vec<T> {
        let p = self.pixels();
        (0..self.bands).map(|b| self.data[b * p + pixel]).collect()
    }

    /// Converts every sample to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Result<HsiCube<U>> {
        let data = self.data.iter().map(|v| U::of(v.to_f64_lossy())).collect();
        HsiCube::new(self.rows, self.cols, self.bands, data)
    }

    /// Applies `f` sample-wise, keeping the shape.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(
            self.rows,
            self.cols,
            self.bands,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Reshapes to an `L × P` pixel matrix (one column per pixel, row-major
    /// pixel order).
    pub fn to_pixel_matrix(&self) -> PixelMatrix<T> {
        reshape_cube(self)
    }

    /// Inverse of [`reshape_cube`].
    pub fn from_pixel_matrix(rows: usize, cols: usize, m: &PixelMatrix<T>) -> Result<Self> {
        if rows * cols != m.pixels() {
            return Err(Error::contract(format!(
                "{rows}x{cols} image cannot hold {} pixel columns",
                m.pixels()
            )));
        }
        let p = m.pixels();
        let l = m.bands();
        let mut data = vec![T::zero(); p * l];
        for (i, col) in m.columns().enumerate() {
            for (b, &v) in col.iter().enumerate() {
                data[b * p + i] = v;
            }
        }
        Self::new(rows, cols, l, data)
    }
}

/// `L × P` matrix whose column `i` is the spectrum of flat pixel `i`.
///
/// Columns are stored contiguously so per-pixel access is a slice.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelMatrix<T> {
    bands: usize,
    pixels: usize,
    data: Vec<T>,
}

impl<T: Scalar> PixelMatrix<T> {
    pub fn new(bands: usize, pixels: usize, data: Vec<T>) -> Result<Self> {
        if bands == 0 {
            return Err(Error::param("pixel matrix needs at least one band"));
        }
        if data.len() != bands * pixels {
            return Err(Error::contract(format!(
                "{bands}x{pixels} pixel matrix needs {} values, got {}",
                bands * pixels,
                data.len()
            )));
        }
        Ok(Self {
            bands,
            pixels,
            data,
        })
    }

    /// Builds a matrix from explicit column vectors of equal length.
    pub fn from_columns<C: AsRef<[T]>>(columns: &[C]) -> Result<Self> {
        let bands = columns.first().map_or(0, |c| c.as_ref().len());
        let mut data = Vec::with_capacity(bands * columns.len());
        for (i, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != bands {
                return Err(Error::contract(format!(
                    "column {i} has length {}, expected {bands}",
                    c.len()
                )));
            }
            data.extend_from_slice(c);
        }
        Self::new(bands, columns.len(), data)
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn pixels(&self) -> usize {
        self.pixels
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn column(&self, i: usize) -> &[T] {
        &self.data[i * self.bands..(i + 1) * self.bands]
    }

    pub fn columns(&self) -> std::slice::ChunksExact<'_, T> {
        self.data.chunks_exact(self.bands)
    }

    /// Sub-matrix of the given columns, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.bands);
        for &i in indices {
            data.extend_from_slice(self.column(i));
        }
        Self {
            bands: self.bands,
            pixels: indices.len(),
            data,
        }
    }

    /// Column mean, computed relative to the first column so that identical
    /// columns yield their common value exactly.
    pub fn mean(&self) -> Vec<T> {
        let mut mean = vec![T::zero(); self.bands];
        if self.pixels == 0 {
            return mean;
        }
        let reference = self.column(0);
        for col in self.columns() {
            for ((m, &x), &r) in mean.iter_mut().zip(col).zip(reference) {
                *m = *m + (x - r);
            }
        }
        let n = T::of_usize(self.pixels);
        for (m, &r) in mean.iter_mut().zip(reference) {
            *m = r + *m / n;
        }
        mean
    }
}

/// Single-band image normalized to `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GuideImage<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
}

impl<T: Scalar> GuideImage<T> {
    /// Wraps raw intensities; values are used as given.
    pub fn new(rows: usize, cols: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::contract(format!(
                "{rows}x{cols} guide image needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        Ok(Self { rows, cols, values })
    }

    /// Min-max normalizes `values` into `[0, 1]`; a constant input maps to zeros.
    pub fn normalized(rows: usize, cols: usize, mut values: Vec<T>) -> Result<Self> {
        let (lo, hi) = values
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        if hi > lo {
            let span = hi - lo;
            for v in &mut values {
                *v = ((*v - lo) / span).max(T::zero()).min(T::one());
            }
        } else {
            values.iter_mut().for_each(|v| *v = T::zero());
        }
        Self::new(rows, cols, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.values[row * self.cols + col]
    }
}

/// Flattens the cube into an `L × P` pixel matrix; column `row * N + col`
/// holds the spectrum of pixel `(row, col)`.
pub fn reshape_cube<T: Scalar>(cube: &HsiCube<T>) -> PixelMatrix<T> {
    let p = cube.pixels();
    let l = cube.bands();
    let mut data = vec![T::zero(); p * l];
    for b in 0..l {
        for (i, &v) in cube.band(b).iter().enumerate() {
            data[i * l + b] = v;
        }
    }
    PixelMatrix {
        bands: l,
        pixels: p,
        data,
    }
}

/// Bandwidth of the spectral-similarity weights in [`weighted_mean_filter`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterSigma<T> {
    /// Median center-to-neighbor spectral distance over a 1% pixel sample.
    Auto,
    Fixed(T),
    /// Equal weights (plain box mean).
    Infinite,
}

/// Spectral-similarity weighted mean over a `(2r+1) × (2r+1)` window.
///
/// Each output spectrum is `Σ w_j x_j / Σ w_j` over in-bounds window pixels
/// with `w_j = exp(-‖x_c - x_j‖² / (2σ²))`. Windows are truncated at the
/// image border.
pub fn weighted_mean_filter<T: Scalar>(
    cube: &HsiCube<T>,
    radius: usize,
    sigma: FilterSigma<T>,
) -> Result<HsiCube<T>> {
    let sigma = match sigma {
        FilterSigma::Fixed(s) if !(s > T::zero()) => {
            return Err(Error::param(format!(
                "filter sigma must be positive, got {s}"
            )))
        }
        FilterSigma::Fixed(s) if s.is_infinite() => None,
        FilterSigma::Fixed(s) => Some(s),
        FilterSigma::Infinite => None,
        FilterSigma::Auto => auto_filter_sigma(cube, radius),
    };
    if radius == 0 {
        return Ok(cube.clone());
    }
    let (rows, cols) = (cube.rows(), cube.cols());
    let m = reshape_cube(cube);
    let l = m.bands();
    let inv_two_var = sigma.map(|s| T::one() / (T::of(2.0) * s * s));

    let filtered: Vec<Vec<T>> = (0..m.pixels())
        .into_par_iter()
        .map(|i| {
            let (r, c) = (i / cols, i % cols);
            let center = m.column(i);
            let mut acc = vec![T::zero(); l];
            let mut lo = center.to_vec();
            let mut hi = center.to_vec();
            let mut total = T::zero();
            for rr in r.saturating_sub(radius)..=(r + radius).min(rows - 1) {
                for cc in c.saturating_sub(radius)..=(c + radius).min(cols - 1) {
                    let x = m.column(rr * cols + cc);
                    let w = match inv_two_var {
                        Some(k) => (-squared_distance(center, x) * k).exp(),
                        None => T::one(),
                    };
                    total = total + w;
                    for b in 0..l {
                        acc[b] = acc[b] + w * (x[b] - center[b]);
                        lo[b] = lo[b].min(x[b]);
                        hi[b] = hi[b].max(x[b]);
                    }
                }
            }
            (0..l)
                .map(|b| (center[b] + acc[b] / total).max(lo[b]).min(hi[b]))
                .collect()
        })
        .collect();

    let mut data = vec![T::zero(); rows * cols * l];
    let p = rows * cols;
    for (i, spec) in filtered.iter().enumerate() {
        for (b, &v) in spec.iter().enumerate() {
            data[b * p + i] = v;
        }
    }
    HsiCube::new(rows, cols, l, data)
}

/// Median center-neighbor spectral distance over every 100th pixel.
/// `None` means the sample saw no spectral variation.
fn auto_filter_sigma<T: Scalar>(cube: &HsiCube<T>, radius: usize) -> Option<T> {
    if radius == 0 {
        return None;
    }
    let (rows, cols) = (cube.rows(), cube.cols());
    let m = reshape_cube(cube);
    let mut distances = Vec::new();
    for i in (0..m.pixels()).step_by(100) {
        let (r, c) = (i / cols, i % cols);
        for rr in r.saturating_sub(radius)..=(r + radius).min(rows - 1) {
            for cc in c.saturating_sub(radius)..=(c + radius).min(cols - 1) {
                let j = rr * cols + cc;
                if j != i {
                    distances.push(squared_distance(m.column(i), m.column(j)).sqrt());
                }
            }
        }
    }
    if distances.is_empty() {
        return None;
    }
    distances.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let median = distances[distances.len() / 2];
    (median > T::zero()).then_some(median)
}

#[inline]
pub(crate) fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

/// Adds i.i.d. zero-mean Gaussian noise of standard deviation `sigma`,
/// drawn from a ChaCha8 stream seeded with `seed`.
pub fn add_awgn<T: Scalar>(cube: &HsiCube<T>, sigma: T, seed: u64) -> Result<HsiCube<T>> {
    if !(sigma >= T::zero()) || !sigma.is_finite() {
        return Err(Error::param(format!(
            "noise sigma must be finite and non-negative, got {sigma}"
        )));
    }
    if sigma == T::zero() {
        return Ok(cube.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = cube
        .data()
        .iter()
        .map(|&v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v + sigma * T::of(z)
        })
        .collect();
    HsiCube::new(cube.rows(), cube.cols(), cube.bands(), data)
}

/// Projects every pixel onto the first global principal direction and
/// normalizes the result to `[0, 1]`.
pub fn first_pc_image<T: Scalar>(cube: &HsiCube<T>) -> Result<GuideImage<T>> {
    let m = reshape_cube(cube);
    let basis = linalg::fit_pca(&m, 1)?;
    let projected = linalg::project(&basis, &m)?;
    GuideImage::normalized(cube.rows(), cube.cols(), projected.data().to_vec())
}
