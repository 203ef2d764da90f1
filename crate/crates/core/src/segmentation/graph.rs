use crate::cube::GuideImage;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const SIGMA_FLOOR: f64 = 1e-6;

/// Bandwidth of the intensity-similarity kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphSigma<T> {
    /// Standard deviation of all absolute neighbor differences.
    Auto,
    Fixed(T),
}

/// 4-connected pixel lattice with similarity weights normalized to sum 1.
///
/// Edge order: pixels row-major, and for each pixel its right neighbor edge
/// followed by its lower neighbor edge.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationGraph<T> {
    rows: usize,
    cols: usize,
    sigma: T,
    edges: Vec<(usize, usize)>,
    raw: Vec<T>,
    weights: Vec<T>,
    vertex_weights: Vec<T>,
}

impl<T: Scalar> SegmentationGraph<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vertex_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Unnormalized similarities `exp(-(g_i - g_j)² / 2σ²)`.
    pub fn raw_similarities(&self) -> &[T] {
        &self.raw
    }

    /// Similarities normalized to sum 1.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Total normalized weight incident to each vertex.
    pub fn vertex_weights(&self) -> &[T] {
        &self.vertex_weights
    }

    /// Stationary distribution of the random walk on the full graph.
    pub fn stationary(&self) -> Vec<T> {
        let total: T = self.vertex_weights.iter().copied().sum();
        self.vertex_weights.iter().map(|&w| w / total).collect()
    }
}

pub fn build_graph<T: Scalar>(
    guide: &GuideImage<T>,
    sigma: GraphSigma<T>,
) -> Result<SegmentationGraph<T>> {
    let (rows, cols) = (guide.rows(), guide.cols());
    if rows * cols < 2 {
        return Err(Error::param(
            "segmentation graph needs at least two pixels",
        ));
    }
    let g = guide.values();
    let mut edges = Vec::with_capacity(rows * (cols - 1) + (rows - 1) * cols);
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                edges.push((i, i + 1));
            }
            if r + 1 < rows {
                edges.push((i, i + cols));
            }
        }
    }
    let diffs: Vec<T> = edges.iter().map(|&(i, j)| (g[i] - g[j]).abs()).collect();

    let sigma = match sigma {
        GraphSigma::Fixed(s) if s > T::zero() && s.is_finite() => s,
        GraphSigma::Fixed(s) => {
            return Err(Error::param(format!(
                "graph sigma must be positive and finite, got {s}"
            )))
        }
        GraphSigma::Auto => {
            let n = T::of_usize(diffs.len());
            let mean = diffs.iter().copied().sum::<T>() / n;
            let var = diffs
                .iter()
                .map(|&d| (d - mean) * (d - mean))
                .sum::<T>()
                / n;
            var.sqrt().max(T::of(SIGMA_FLOOR))
        }
    };

    let inv_two_var = T::one() / (T::of(2.0) * sigma * sigma);
    let raw: Vec<T> = diffs
        .iter()
        .map(|&d| (-d * d * inv_two_var).exp().max(T::min_positive_value()))
        .collect();
    let total: T = raw.iter().copied().sum();
    let weights: Vec<T> = raw.iter().map(|&s| s / total).collect();
    let mut vertex_weights = vec![T::zero(); rows * cols];
    for (&(i, j), &w) in edges.iter().zip(&weights) {
        vertex_weights[i] = vertex_weights[i] + w;
        vertex_weights[j] = vertex_weights[j] + w;
    }
    Ok(SegmentationGraph {
        rows,
        cols,
        sigma,
        edges,
        raw,
        weights,
        vertex_weights,
    })
}
