use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LabelMap;
use crate::error::{Error, Result};

/// A seeded per-class train/test split.
///
/// Each class contributes `min(T, ⌊n_c / 2⌋)` training pixels; the rest of
/// its labeled pixels are test pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    pub per_class: usize,
    pub seed: u64,
    /// Training pixel indices, ascending.
    pub train: Vec<usize>,
    /// Test pixel indices, ascending.
    pub test: Vec<usize>,
    /// Classes with fewer than two labeled pixels, left out entirely.
    pub excluded: Vec<u32>,
}

pub fn split_samples(gt: &LabelMap, per_class: usize, seed: u64) -> Result<SplitSpec> {
    if per_class == 0 {
        return Err(Error::param("training samples per class must be at least 1"));
    }
    let mut by_class: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &l) in gt.labels().iter().enumerate() {
        if l != LabelMap::UNLABELED {
            by_class.entry(l).or_default().push(i);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut excluded = Vec::new();
    for (class, mut pixels) in by_class {
        if pixels.len() < 2 {
            log::warn!("class {class} has {} labeled pixel(s); excluded from the split", pixels.len());
            excluded.push(class);
            continue;
        }
        let take = per_class.min(pixels.len() / 2);
        pixels.shuffle(&mut rng);
        train.extend_from_slice(&pixels[..take]);
        test.extend_from_slice(&pixels[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitSpec {
        per_class,
        seed,
        train,
        test,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gt(sizes: &[usize]) -> LabelMap {
        let mut labels = vec![0u32; 3];
        for (k, &n) in sizes.iter().enumerate() {
            labels.extend(std::iter::repeat_n(k as u32 + 1, n));
        }
        let n = labels.len();
        LabelMap::new(1, n, labels).unwrap()
    }

    fn count(split: &[usize], gt: &LabelMap, class: u32) -> usize {
        split.iter().filter(|&&i| gt.labels()[i] == class).count()
    }

    #[test]
    fn half_class_cap() {
        let g = gt(&[20, 100]);
        let s = split_samples(&g, 30, 1).unwrap();
        assert_eq!(count(&s.train, &g, 1), 10);
        assert_eq!(count(&s.test, &g, 1), 10);
        assert_eq!(count(&s.train, &g, 2), 30);
    }

    #[test]
    fn exact_counts() {
        let g = gt(&[100]);
        let s = split_samples(&g, 5, 2).unwrap();
        assert_eq!(s.train.len(), 5);
        assert_eq!(s.test.len(), 95);
    }

    #[test]
    fn deterministic_and_disjoint() {
        let g = gt(&[13, 40, 7, 1]);
        let a = split_samples(&g, 5, 9).unwrap();
        assert_eq!(a, split_samples(&g, 5, 9).unwrap());
        assert_ne!(a.train, split_samples(&g, 5, 10).unwrap().train);
        assert_eq!(a.excluded, vec![4]);
        let mut all: Vec<usize> = a.train.iter().chain(&a.test).copied().collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), a.train.len() + a.test.len());
        // unlabeled pixels 0..3 and the excluded class never appear
        assert!(all.iter().all(|&i| i >= 3 && g.labels()[i] != 4));
        assert_eq!(all.len(), 13 + 40 + 7);
    }

    #[test]
    fn rejects_zero_training() {
        assert!(split_samples(&gt(&[4]), 0, 1).is_err());
    }
}
