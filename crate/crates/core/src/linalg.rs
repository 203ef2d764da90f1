//! Dense symmetric eigendecomposition and PCA.

use crate::cube::PixelMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_TOLERANCE: f64 = 1e-12;
const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Negative eigenvalues smaller than this fraction of `λ_1` are rounding noise.
const NEGATIVE_CLAMP: f64 = 1e-10;
const RATIO_FLOOR: f64 = 1e-15;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    /// Checks symmetry to `1e-12` (scaled by the largest entry when it exceeds 1).
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::contract(format!(
                "order-{n} matrix needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        let scale = data
            .iter()
            .fold(T::one(), |acc, v| acc.max(v.abs()));
        let tol = T::tolerance(SYMMETRY_TOLERANCE) * scale;
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if !((a - b).abs() <= tol) {
                    return Err(Error::contract(format!(
                        "matrix not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `vᵀ A v`.
    pub fn quadratic_form(&self, v: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let av: T = row.iter().zip(v).map(|(&a, &x)| a * x).sum();
            acc = acc + v[i] * av;
        }
        acc
    }
}

/// Eigenvalues in non-increasing order with matching orthonormal
/// eigenvectors; `vectors[k * n .. (k + 1) * n]` is the `k`-th eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum<T> {
    values: Vec<T>,
    vectors: Vec<T>,
}

impl<T: Scalar> EigenSpectrum<T> {
    /// Spectrum with only eigenvalues (unit basis vectors as placeholders).
    /// Handy for feeding [`eigen_ratio`] known values.
    pub fn from_values(mut values: Vec<T>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        let n = values.len();
        let mut vectors = vec![T::zero(); n * n];
        for k in 0..n {
            vectors[k * n + k] = T::one();
        }
        Self { values, vectors }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[T] {
        let n = self.values.len();
        &self.vectors[k * n..(k + 1) * n]
    }
}

/// Fitted PCA: `output_dim` orthonormal directions in the `input_dim`-band
/// space, the centering mean, and the full covariance spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionBasis<T> {
    input_dim: usize,
    output_dim: usize,
    /// Column-major `L × d`; column `k` is contiguous.
    w: Vec<T>,
    mean: Vec<T>,
    spectrum: EigenSpectrum<T>,
}

impl<T: Scalar> ProjectionBasis<T> {
    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    /// Projection direction `k`.
    pub fn direction(&self, k: usize) -> &[T] {
        &self.w[k * self.input_dim..(k + 1) * self.input_dim]
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn spectrum(&self) -> &EigenSpectrum<T> {
        &self.spectrum
    }

    /// `Tr(Wᵀ A W)`.
    pub fn captured_variance(&self, cov: &SymMatrix<T>) -> T {
        (0..self.output_dim)
            .map(|k| cov.quadratic_form(self.direction(k)))
            .sum()
    }

    /// Maps a reduced vector back to band space: `W y + mean`.
    pub fn reconstruct(&self, y: &[T]) -> Vec<T> {
        let mut x = self.mean.clone();
        for (k, &yk) in y.iter().enumerate().take(self.output_dim) {
            for (xi, &wi) in x.iter_mut().zip(self.direction(k)) {
                *xi = *xi + wi * yk;
            }
        }
        x
    }
}

/// Population covariance `(1/P) Σ (x_i - x̄)(x_i - x̄)ᵀ`.
pub fn covariance<T: Scalar>(m: &PixelMatrix<T>) -> Result<SymMatrix<T>> {
    let mean = m.mean();
    covariance_about(m, &mean)
}

fn covariance_about<T: Scalar>(m: &PixelMatrix<T>, mean: &[T]) -> Result<SymMatrix<T>> {
    if m.pixels() == 0 {
        return Err(Error::param("covariance of an empty pixel set"));
    }
    let l = m.bands();
    let mut acc = vec![T::zero(); l * l];
    let mut centered = vec![T::zero(); l];
    for col in m.columns() {
        for b in 0..l {
            centered[b] = col[b] - mean[b];
        }
        for i in 0..l {
            let ci = centered[i];
            if ci == T::zero() {
                continue;
            }
            let row = &mut acc[i * l..(i + 1) * l];
            for j in i..l {
                row[j] = row[j] + ci * centered[j];
            }
        }
    }
    let inv_p = T::one() / T::of_usize(m.pixels());
    for i in 0..l {
        for j in i..l {
            let v = acc[i * l + j] * inv_p;
            acc[i * l + j] = v;
            acc[j * l + i] = v;
        }
    }
    Ok(SymMatrix { n: l, data: acc })
}

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius norm falls below
/// `1e-12 · ‖A‖_F`, or after 100 sweeps.
pub fn sym_eigen<T: Scalar>(a: &SymMatrix<T>) -> Result<EigenSpectrum<T>> {
    let n = a.order();
    let mut m = a.data.clone();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }

    let frob = m.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
    let target = T::tolerance(JACOBI_TOLERANCE) * frob;
    let off_norm = |m: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    for sweep in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let (app, aqq) = (m[p * n + p], m[q * n + q]);
                // negligible against both diagonal entries: drop it
                let g = T::of(100.0) * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[p * n + q] = T::zero();
                    m[q * n + p] = T::zero();
                    continue;
                }
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let t = if theta.abs() > T::of(1e150).min(T::max_value().sqrt()) {
                    T::one() / (T::of(2.0) * theta)
                } else {
                    let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, n, p, q, c, s);
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = T::zero();
                m[q * n + p] = T::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m[i * n + i]).collect();
    // stable: equal eigenvalues keep their index order
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));

    let mut values: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    if let Some(&top) = values.first() {
        if top > T::zero() {
            let floor = T::of(NEGATIVE_CLAMP) * top;
            for val in &mut values {
                if *val < T::zero() && -*val < floor {
                    *val = T::zero();
                }
            }
        }
    }
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend((0..n).map(|i| v[i * n + k]));
    }
    Ok(EigenSpectrum { values, vectors })
}

/// Applies the rotation in the `(p, q)` plane to rows and columns of `m`
/// and to the columns of the accumulated eigenvector matrix `v`.
#[inline]
fn rotate<T: Scalar>(m: &mut [T], v: &mut [T], n: usize, p: usize, q: usize, c: T, s: T) {
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let mkp = m[k * n + p];
        let mkq = m[k * n + q];
        let new_p = c * mkp - s * mkq;
        let new_q = s * mkp + c * mkq;
        m[k * n + p] = new_p;
        m[p * n + k] = new_p;
        m[k * n + q] = new_q;
        m[q * n + k] = new_q;
    }
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

/// Flips `v` so that its largest-magnitude entry (first one on ties) is positive.
pub fn fix_sign<T: Scalar>(v: &mut [T]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < T::zero()) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Fits the top-`d` principal directions of the columns of `m`.
pub fn fit_pca<T: Scalar>(m: &PixelMatrix<T>, d: usize) -> Result<ProjectionBasis<T>> {
    let l = m.bands();
    if d == 0 || d > l {
        return Err(Error::param(format!(
            "reduced dimension must be in 1..={l}, got {d}"
        )));
    }
    let mean = m.mean();
    let cov = covariance_about(m, &mean)?;
    let spectrum = sym_eigen(&cov)?;
    let mut w = Vec::with_capacity(l * d);
    for k in 0..d {
        let mut dir = spectrum.vector(k).to_vec();
        fix_sign(&mut dir);
        w.extend(dir);
    }
    Ok(ProjectionBasis {
        input_dim: l,
        output_dim: d,
        w,
        mean,
        spectrum,
    })
}

/// Centered projection: column `i` of the result is `Wᵀ (x_i - mean)`.
pub fn project<T: Scalar>(b: &ProjectionBasis<T>, m: &PixelMatrix<T>) -> Result<PixelMatrix<T>> {
    project_with(b, m, Some(b.mean()))
}

/// Projection about the origin: column `i` of the result is `Wᵀ x_i`.
pub fn project_uncentered<T: Scalar>(
    b: &ProjectionBasis<T>,
    m: &PixelMatrix<T>,
) -> Result<PixelMatrix<T>> {
    project_with(b, m, None)
}

fn project_with<T: Scalar>(
    b: &ProjectionBasis<T>,
    m: &PixelMatrix<T>,
    origin: Option<&[T]>,
) -> Result<PixelMatrix<T>> {
    if m.bands() != b.input_dim {
        return Err(Error::contract(format!(
            "basis expects {} bands, matrix has {}",
            b.input_dim,
            m.bands()
        )));
    }
    let d = b.output_dim;
    let mut out = Vec::with_capacity(d * m.pixels());
    let mut x = vec![T::zero(); b.input_dim];
    for col in m.columns() {
        match origin {
            Some(mean) => {
                for ((xi, &c), &mu) in x.iter_mut().zip(col).zip(mean) {
                    *xi = c - mu;
                }
            }
            None => x.copy_from_slice(col),
        }
        for k in 0..d {
            out.push(
                b.direction(k)
                    .iter()
                    .zip(&x)
                    .fold(T::zero(), |acc, (&w, &v)| acc + w * v),
            );
        }
    }
    PixelMatrix::new(d, m.pixels(), out)
}

/// `λ_1 / max(λ_2, 1e-15)`.
pub fn eigen_ratio<T: Scalar>(s: &EigenSpectrum<T>) -> Result<T> {
    if s.len() < 2 {
        return Err(Error::param(format!(
            "eigen ratio needs at least two eigenvalues, got {}",
            s.len()
        )));
    }
    Ok(s.values[0] / s.values[1].max(T::of(RATIO_FLOOR)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(bands: usize, pixels: usize, seed: u64) -> PixelMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..bands * pixels).map(|_| rng.random_range(-1.0..1.0)).collect();
        PixelMatrix::new(bands, pixels, data).unwrap()
    }

    fn random_symmetric(n: usize, seed: u64) -> SymMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-1.0..1.0);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix::new(n, data).unwrap()
    }

    fn determinant(n: usize, mut a: Vec<f64>) -> f64 {
        let mut det = 1.0;
        for c in 0..n {
            let piv = (c..n)
                .max_by(|&i, &j| a[i * n + c].abs().partial_cmp(&a[j * n + c].abs()).unwrap())
                .unwrap();
            if a[piv * n + c] == 0.0 {
                return 0.0;
            }
            if piv != c {
                for k in 0..n {
                    a.swap(c * n + k, piv * n + k);
                }
                det = -det;
            }
            det *= a[c * n + c];
            for r in c + 1..n {
                let f = a[r * n + c] / a[c * n + c];
                for k in c..n {
                    a[r * n + k] -= f * a[c * n + k];
                }
            }
        }
        det
    }

    #[test]
    fn covariance_single_column_is_zero() {
        let m = PixelMatrix::from_columns(&[[1.5, -2.0, 0.3]]).unwrap();
        let c = covariance(&m).unwrap();
        assert!(c.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn covariance_two_columns() {
        let m = PixelMatrix::from_columns(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let c = covariance(&m).unwrap();
        assert_eq!(c.data(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn covariance_matches_double_loop() {
        let m = random_matrix(4, 20, 11);
        let c = covariance(&m).unwrap();
        let p = m.pixels() as f64;
        let mut mean = [0.0; 4];
        for col in m.columns() {
            for b in 0..4 {
                mean[b] += col[b] / p;
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0.0;
                for col in m.columns() {
                    s += (col[i] - mean[i]) * (col[j] - mean[j]);
                }
                assert!((c.get(i, j) - s / p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn covariance_rejects_empty() {
        let m = PixelMatrix::<f64>::new(3, 0, vec![]).unwrap();
        assert!(covariance(&m).is_err());
    }

    #[test]
    fn identity_spectrum() {
        let s = sym_eigen(&SymMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = SymMatrix::new(2, vec![2.0f64, 1.0, 1.0, 2.0]).unwrap();
        let s = sym_eigen(&a).unwrap();
        assert!((s.values()[0] - 3.0).abs() < 1e-14);
        assert!((s.values()[1] - 1.0).abs() < 1e-14);
        let r = 1.0 / 2f64.sqrt();
        let v0 = s.vector(0);
        assert!((v0[0].abs() - r).abs() < 1e-14 && (v0[0] - v0[1]).abs() < 1e-14);
        let v1 = s.vector(1);
        assert!((v1[0].abs() - r).abs() < 1e-14 && (v1[0] + v1[1]).abs() < 1e-14);
    }

    #[test]
    fn trace_and_determinant_oracle() {
        let a = random_symmetric(8, 5);
        let s = sym_eigen(&a).unwrap();
        let sum: f64 = s.values().iter().sum();
        assert!((sum - a.trace()).abs() < 1e-9);
        let prod: f64 = s.values().iter().product();
        let det = determinant(8, a.data().to_vec());
        assert!(((prod - det) / det).abs() < 1e-6);
    }

    #[test]
    fn eigen_invariants_hold() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 9);
            let a = random_symmetric(n, seed);
            let s = sym_eigen(&a).unwrap();
            for w in s.values().windows(2) {
                assert!(w[0] >= w[1]);
            }
            for i in 0..n {
                for j in 0..n {
                    let dot: f64 = s.vector(i).iter().zip(s.vector(j)).map(|(x, y)| x * y).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() <= 1e-10);
                }
                let v = s.vector(i);
                let lam = s.values()[i];
                let mut res = 0.0;
                for r in 0..n {
                    let av: f64 = (0..n).map(|c| a.get(r, c) * v[c]).sum();
                    res += (av - lam * v[r]).powi(2);
                }
                assert!(res.sqrt() <= 1e-8 * (1.0 + lam.abs()));
            }
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        assert!(matches!(
            SymMatrix::new(2, vec![1.0, 0.5, 0.4, 1.0]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn zero_matrix_spectrum() {
        let a = SymMatrix::<f64>::new(3, vec![0.0; 9]).unwrap();
        let s = sym_eigen(&a).unwrap();
        assert_eq!(s.values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn pca_rank_one_captures_everything() {
        let cols: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 3.0 * i as f64 - 1.0]).collect();
        let m = PixelMatrix::from_columns(&cols).unwrap();
        let b = fit_pca(&m, 1).unwrap();
        let cov = covariance(&m).unwrap();
        assert!((b.captured_variance(&cov) - cov.trace()).abs() < 1e-9);
    }

    #[test]
    fn pca_full_basis_preserves_trace() {
        let m = random_matrix(5, 30, 2);
        let b = fit_pca(&m, 5).unwrap();
        let cov = covariance(&m).unwrap();
        assert!((b.captured_variance(&cov) - cov.trace()).abs() < 1e-9);
    }

    #[test]
    fn pca_beats_random_orthonormal_pairs() {
        let m = random_matrix(5, 40, 3);
        let b = fit_pca(&m, 2).unwrap();
        let cov = covariance(&m).unwrap();
        let best = b.captured_variance(&cov);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let mut u: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut v: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
            let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            u.iter_mut().for_each(|x| *x /= nu);
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(&u).for_each(|(x, y)| *x -= dot * y);
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= nv);
            let t = cov.quadratic_form(&u) + cov.quadratic_form(&v);
            assert!(best >= t - 1e-12);
        }
    }

    #[test]
    fn pca_rejects_oversized_dimension() {
        let m = random_matrix(3, 10, 4);
        assert!(matches!(fit_pca(&m, 4), Err(Error::Parameter(_))));
        assert!(fit_pca(&m, 0).is_err());
    }

    #[test]
    fn sign_convention() {
        let m = random_matrix(6, 25, 8);
        let b = fit_pca(&m, 3).unwrap();
        for k in 0..3 {
            let dir = b.direction(k);
            let big = dir.iter().cloned().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            assert!(big > 0.0);
        }
    }

    #[test]
    fn project_reconstructs_with_full_basis() {
        let m = random_matrix(4, 12, 5);
        let b = fit_pca(&m, 4).unwrap();
        let y = project(&b, &m).unwrap();
        for (i, col) in m.columns().enumerate() {
            let x = b.reconstruct(y.column(i));
            for (a, c) in x.iter().zip(col) {
                assert!((a - c).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn project_mean_is_zero() {
        let m = random_matrix(4, 12, 6);
        let b = fit_pca(&m, 2).unwrap();
        let mean = PixelMatrix::from_columns(&[b.mean().to_vec()]).unwrap();
        let y = project(&b, &mean).unwrap();
        assert!(y.data().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn project_matches_explicit_product() {
        let cols = [
            [1.0, 2.0, 0.5],
            [-1.0, 0.0, 2.0],
            [0.5, 1.5, -0.5],
            [2.0, -1.0, 1.0],
            [0.0, 0.5, 0.0],
            [1.5, 1.0, 1.0],
        ];
        let m = PixelMatrix::from_columns(&cols).unwrap();
        let b = fit_pca(&m, 2).unwrap();
        let y = project(&b, &m).unwrap();
        let yu = project_uncentered(&b, &m).unwrap();
        for (i, c) in cols.iter().enumerate() {
            for k in 0..2 {
                let w = b.direction(k);
                let centered: f64 = (0..3).map(|r| w[r] * (c[r] - b.mean()[r])).sum();
                let raw: f64 = (0..3).map(|r| w[r] * c[r]).sum();
                assert!((y.column(i)[k] - centered).abs() < 1e-12);
                assert!((yu.column(i)[k] - raw).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn project_rejects_dimension_mismatch() {
        let m = random_matrix(4, 12, 6);
        let b = fit_pca(&m, 2).unwrap();
        let other = random_matrix(3, 5, 1);
        assert!(matches!(project(&b, &other), Err(Error::Contract(_))));
    }

    #[test]
    fn eigen_ratio_examples() {
        let r = eigen_ratio(&EigenSpectrum::from_values(vec![4.0, 2.0, 1.0])).unwrap();
        assert_eq!(r, 2.0);
        let r = eigen_ratio(&EigenSpectrum::from_values(vec![0.3, 0.3])).unwrap();
        assert_eq!(r, 1.0);
        let r = eigen_ratio(&EigenSpectrum::from_values(vec![5.0f64, 0.0])).unwrap();
        assert!((r - 5e15).abs() / 5e15 < 1e-12);
        assert!(eigen_ratio(&EigenSpectrum::from_values(vec![1.0])).is_err());
    }

    #[test]
    fn f32_pca() {
        let data: Vec<f32> = (0..40).map(|i| ((i * 7) % 13) as f32 * 0.1).collect();
        let m = PixelMatrix::new(4, 10, data).unwrap();
        let b = fit_pca(&m, 2).unwrap();
        let cov = covariance(&m).unwrap();
        let sum = b.spectrum().values()[0] + b.spectrum().values()[1];
        assert!((b.captured_variance(&cov) - sum).abs() < 1e-4);
    }
}
