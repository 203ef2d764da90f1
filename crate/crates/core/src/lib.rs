//! Superpixelwise PCA (SuperPCA) and its multiscale decision-fusion extension
//! (MSuperPCA) for hyperspectral image dimensionality reduction.
//!
//! The pipeline is:
//!
//! 1. optional spectral-similarity smoothing ([`cube::weighted_mean_filter`]),
//! 2. a guide image from the first global principal component ([`cube::first_pc_image`]),
//! 3. entropy-rate superpixels on the guide image ([`segmentation::ers_segment`]),
//! 4. an independent PCA inside every superpixel ([`superpca::superpca_reduce`]),
//! 5. per-scale classification and majority-vote fusion ([`multiscale`], [`classify`]),
//! 6. OA / AA / Kappa scoring ([`metrics`]).
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`, which is what the CLI uses.
//!
//! Pixels are always flattened row-major: pixel `(row, col)` has flat index
//! `row * cols + col`. Every module relies on this convention.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cube;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod multiscale;
pub mod pipeline;
pub mod scalar;
pub mod segmentation;
pub mod superpca;
pub mod synthetic;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type HsiCube = cube::HsiCube<f64>;
pub type PixelMatrix = cube::PixelMatrix<f64>;
pub type GuideImage = cube::GuideImage<f64>;
pub type SymMatrix = linalg::SymMatrix<f64>;
pub type EigenSpectrum = linalg::EigenSpectrum<f64>;
pub type ProjectionBasis = linalg::ProjectionBasis<f64>;
pub type SegmentationGraph = segmentation::SegmentationGraph<f64>;
pub type ReducedCube = superpca::ReducedCube<f64>;
pub type ScaleEnsemble = multiscale::ScaleEnsemble<f64>;
pub type LinearModel = classify::LinearModel<f64>;

pub type HsiCube32 = cube::HsiCube<f32>;
pub type PixelMatrix32 = cube::PixelMatrix<f32>;
pub type ReducedCube32 = superpca::ReducedCube<f32>;

pub use classify::{LabelMap, SplitSpec, VoteProfile};
pub use metrics::ConfusionMatrix;
pub use multiscale::ScaleSchedule;
pub use segmentation::RegionMap;
