//! Region maps and the three ways of producing them: entropy-rate
//! superpixels on the guide image, regular rectangular tiles, and spectral
//! k-means clusters.

mod ers;
mod graph;
mod kmeans;
mod square;
mod union_find;

pub use ers::{ers_segment, ers_segment_traced, Alpha, ErsTrace, Merge};
pub use graph::{build_graph, GraphSigma, SegmentationGraph};
pub use kmeans::{kmeans, kmeans_cluster, KMeans};
pub use square::square_partition;
pub use union_find::UnionFind;

use crate::error::{Error, Result};

/// Exhaustive labeling of an `rows × cols` image into regions `0..count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMap {
    rows: usize,
    cols: usize,
    labels: Vec<usize>,
    count: usize,
    connected: bool,
}

impl RegionMap {
    /// Validates that `labels` covers `0..count` with no empty region and,
    /// when `connected` is set, that every region is 4-connected.
    pub fn new(rows: usize, cols: usize, labels: Vec<usize>, connected: bool) -> Result<Self> {
        if labels.len() != rows * cols {
            return Err(Error::contract(format!(
                "{rows}x{cols} region map needs {} labels, got {}",
                rows * cols,
                labels.len()
            )));
        }
        let count = labels.iter().max().map_or(0, |&m| m + 1);
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::contract(format!("region {empty} is empty")));
        }
        let map = Self {
            rows,
            cols,
            labels,
            count,
            connected,
        };
        if connected && !map.regions_are_connected() {
            return Err(Error::contract("a region is not 4-connected"));
        }
        Ok(map)
    }

    /// Renumbers arbitrary labels by order of first appearance in row-major order.
    pub fn from_raw_labels(
        rows: usize,
        cols: usize,
        raw: &[usize],
        connected: bool,
    ) -> Result<Self> {
        let mut remap = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|&l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Self::new(rows, cols, labels, connected)
    }

    /// One region covering the whole image.
    pub fn single(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            labels: vec![0; rows * cols],
            count: 1,
            connected: true,
        }
    }

    /// Every pixel its own region.
    pub fn singletons(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            labels: (0..rows * cols).collect(),
            count: rows * cols,
            connected: true,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn region_count(&self) -> usize {
        self.count
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Pixel indices of each region, ascending.
    pub fn regions(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Flood-fills each region and checks it reaches all of its pixels.
    pub fn regions_are_connected(&self) -> bool {
        let mut seen = vec![false; self.labels.len()];
        let mut visited_regions = vec![false; self.count];
        let mut stack = Vec::new();
        for start in 0..self.labels.len() {
            if seen[start] {
                continue;
            }
            let label = self.labels[start];
            if visited_regions[label] {
                // second disjoint piece of the same region
                return false;
            }
            visited_regions[label] = true;
            seen[start] = true;
            stack.push(start);
            while let Some(i) = stack.pop() {
                let (r, c) = (i / self.cols, i % self.cols);
                let mut visit = |j: usize| {
                    if !seen[j] && self.labels[j] == label {
                        seen[j] = true;
                        stack.push(j);
                    }
                };
                if r > 0 {
                    visit(i - self.cols);
                }
                if r + 1 < self.rows {
                    visit(i + self.cols);
                }
                if c > 0 {
                    visit(i - 1);
                }
                if c + 1 < self.cols {
                    visit(i + 1);
                }
            }
        }
        true
    }
}
