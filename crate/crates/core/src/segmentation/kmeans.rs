use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RegionMap;
use crate::cube::{squared_distance, PixelMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Result of Lloyd's algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeans<T> {
    /// Cluster of each column, in `0..k`.
    pub assignments: Vec<usize>,
    /// `k` centroids of length `L`.
    pub centroids: Vec<Vec<T>>,
    pub iterations: usize,
}

/// k-means++ seeding followed by Lloyd iterations.
///
/// Stops after `max_iter` iterations or once assignments stop changing.
/// A cluster that empties is reseeded at the point farthest from its own
/// centroid.
pub fn kmeans<T: Scalar>(
    m: &PixelMatrix<T>,
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<KMeans<T>> {
    let p = m.pixels();
    if k == 0 || k > p {
        return Err(Error::param(format!(
            "cluster count must be in 1..={p}, got {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centroids(m, k, &mut rng);
    let mut assignments = vec![usize::MAX; p];
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let mut changed = false;
        let mut dist = vec![T::zero(); p];
        for (i, x) in m.columns().enumerate() {
            let (best, d) = nearest(x, &centroids);
            dist[i] = d;
            if assignments[i] != best {
                assignments[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }

        let l = m.bands();
        let mut sums = vec![vec![T::zero(); l]; k];
        let mut counts = vec![0usize; k];
        for (x, &a) in m.columns().zip(&assignments) {
            counts[a] += 1;
            for (s, &v) in sums[a].iter_mut().zip(x) {
                *s = *s + v;
            }
        }
        let mut taken = vec![false; p];
        for c in 0..k {
            if counts[c] > 0 {
                let n = T::of_usize(counts[c]);
                centroids[c] = sums[c].iter().map(|&s| s / n).collect();
                continue;
            }
            // farthest point from its current centroid
            let far = (0..p)
                .filter(|&i| !taken[i])
                .fold(None, |best: Option<usize>, i| match best {
                    Some(b) if dist[b] >= dist[i] => Some(b),
                    _ => Some(i),
                });
            if let Some(i) = far {
                taken[i] = true;
                centroids[c] = m.column(i).to_vec();
            }
        }
    }

    Ok(KMeans {
        assignments,
        centroids,
        iterations,
    })
}

fn seed_centroids<T: Scalar>(m: &PixelMatrix<T>, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<T>> {
    let p = m.pixels();
    let mut chosen = vec![false; p];
    let first = rng.random_range(0..p);
    chosen[first] = true;
    let mut centroids = vec![m.column(first).to_vec()];
    let mut d2: Vec<f64> = m
        .columns()
        .map(|x| squared_distance(x, &centroids[0]).to_f64_lossy())
        .collect();

    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random_range(0.0..total);
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 && !chosen[i] {
                    pick = Some(i);
                    if target < d {
                        break;
                    }
                    target -= d;
                }
            }
            pick
        } else {
            None
        }
        .or_else(|| (0..p).find(|&i| !chosen[i]))
        .expect("k <= P leaves an unchosen point");
        chosen[next] = true;
        let c = m.column(next).to_vec();
        for (i, x) in m.columns().enumerate() {
            d2[i] = d2[i].min(squared_distance(x, &c).to_f64_lossy());
        }
        centroids.push(c);
    }
    centroids
}

fn nearest<T: Scalar>(x: &[T], centroids: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, squared_distance(x, &centroids[0]));
    for (c, centroid) in centroids.iter().enumerate().skip(1) {
        let d = squared_distance(x, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Spectral k-means clusters as a (generally disconnected) region map.
pub fn kmeans_cluster<T: Scalar>(
    m: &PixelMatrix<T>,
    rows: usize,
    cols: usize,
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<RegionMap> {
    if rows * cols != m.pixels() {
        return Err(Error::contract(format!(
            "{rows}x{cols} image does not match {} pixels",
            m.pixels()
        )));
    }
    let fit = kmeans(m, k, seed, max_iter)?;
    RegionMap::from_raw_labels(rows, cols, &fit.assignments, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_clouds() -> (PixelMatrix<f64>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut cols = Vec::new();
        let mut truth = Vec::new();
        for i in 0..40 {
            let center = if i % 3 == 0 { 10.0 } else { -10.0 };
            cols.push([
                center + rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ]);
            truth.push(usize::from(i % 3 == 0));
        }
        (PixelMatrix::from_columns(&cols).unwrap(), truth)
    }

    #[test]
    fn every_pixel_its_own_cluster() {
        let m = PixelMatrix::from_columns(&[[0.0], [1.0], [5.0], [2.5]]).unwrap();
        let map = kmeans_cluster(&m, 2, 2, 4, 1, 100).unwrap();
        assert_eq!(map.region_count(), 4);
        assert!(!map.is_connected());
    }

    #[test]
    fn separated_clouds() {
        let (m, truth) = two_clouds();
        let map = kmeans_cluster(&m, 5, 8, 2, 9, 100).unwrap();
        // same partition up to label names
        for i in 0..40 {
            for j in 0..40 {
                assert_eq!(truth[i] == truth[j], map.labels()[i] == map.labels()[j]);
            }
        }
    }

    #[test]
    fn single_cluster_centroid_is_mean() {
        let (m, _) = two_clouds();
        let fit = kmeans(&m, 1, 0, 100).unwrap();
        let mean = m.mean();
        for (c, mu) in fit.centroids[0].iter().zip(&mean) {
            assert!((c - mu).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_and_validates() {
        let (m, _) = two_clouds();
        assert_eq!(kmeans(&m, 3, 5, 50).unwrap(), kmeans(&m, 3, 5, 50).unwrap());
        assert!(kmeans(&m, 41, 5, 50).is_err());
        assert!(kmeans(&m, 0, 5, 50).is_err());
    }
}
