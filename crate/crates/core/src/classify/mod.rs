//! Supervised classification of reduced features and decision fusion.

mod linear;
mod nn;
mod split;
mod vote;

pub use linear::{classify_linear, train_linear_margin, LinearModel};
pub use nn::nn_classify;
pub use split::{split_samples, SplitSpec};
pub use vote::{fuse_label_maps, majority_vote, weighted_plurality, VoteProfile};

use crate::error::{Error, Result};

/// Per-pixel class ids in `1..=G`; `0` marks unlabeled pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    rows: usize,
    cols: usize,
    labels: Vec<u32>,
}

impl LabelMap {
    pub const UNLABELED: u32 = 0;

    pub fn new(rows: usize, cols: usize, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != rows * cols {
            return Err(Error::contract(format!(
                "{rows}x{cols} label map needs {} labels, got {}",
                rows * cols,
                labels.len()
            )));
        }
        Ok(Self { rows, cols, labels })
    }

    pub fn unlabeled(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            labels: vec![Self::UNLABELED; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn labels_mut(&mut self) -> &mut [u32] {
        &mut self.labels
    }

    /// Largest class id present (0 if none).
    pub fn class_count(&self) -> u32 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Flat indices of labeled pixels.
    pub fn labeled(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i] != Self::UNLABELED)
            .collect()
    }

    /// Copy keeping only the given pixels' labels.
    pub fn restricted_to(&self, pixels: &[usize]) -> Self {
        let mut out = Self::unlabeled(self.rows, self.cols);
        for &p in pixels {
            out.labels[p] = self.labels[p];
        }
        out
    }
}

impl From<&crate::segmentation::RegionMap> for LabelMap {
    /// Region ids as labels (region 0 becomes label 0).
    fn from(map: &crate::segmentation::RegionMap) -> Self {
        Self {
            rows: map.rows(),
            cols: map.cols(),
            labels: map.labels().iter().map(|&l| l as u32).collect(),
        }
    }
}
