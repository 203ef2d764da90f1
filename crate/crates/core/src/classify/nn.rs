use rayon::prelude::*;

use crate::cube::{squared_distance, PixelMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// 1-nearest-neighbor labels under Euclidean distance; ties go to the
/// smallest training index.
pub fn nn_classify<T: Scalar>(
    train: &PixelMatrix<T>,
    train_labels: &[u32],
    test: &PixelMatrix<T>,
) -> Result<Vec<u32>> {
    if train.pixels() == 0 {
        return Err(Error::param("nearest-neighbor classifier needs training samples"));
    }
    if train_labels.len() != train.pixels() {
        return Err(Error::contract(format!(
            "{} training samples but {} labels",
            train.pixels(),
            train_labels.len()
        )));
    }
    if test.pixels() > 0 && test.bands() != train.bands() {
        return Err(Error::contract(format!(
            "training features have length {}, test features {}",
            train.bands(),
            test.bands()
        )));
    }
    Ok((0..test.pixels())
        .into_par_iter()
        .map(|i| {
            let x = test.column(i);
            let mut best = (0, squared_distance(x, train.column(0)));
            for j in 1..train.pixels() {
                let d = squared_distance(x, train.column(j));
                if d < best.1 {
                    best = (j, d);
                }
            }
            train_labels[best.0]
        })
        .collect())
}
