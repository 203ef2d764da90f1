use super::LabelMap;
use crate::error::{Error, Result};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Labels from a bank of classifiers with their voting strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteProfile {
    labels: Vec<u32>,
    weights: Vec<f64>,
}

impl VoteProfile {
    /// Equal strength `1 / len` for every vote.
    pub fn equal(labels: Vec<u32>) -> Self {
        let w = 1.0 / labels.len().max(1) as f64;
        let weights = vec![w; labels.len()];
        Self { labels, weights }
    }

    pub fn weighted(labels: Vec<u32>, weights: Vec<f64>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::contract(format!(
                "{} votes but {} weights",
                labels.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::param("vote weights must be finite and non-negative"));
        }
        Ok(Self { labels, weights })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `argmax_i Σ_j α_j [l_j = i]`, ties to the smallest class id. Weights are
/// used as given.
pub fn weighted_plurality(labels: &[u32], weights: &[f64]) -> Option<u32> {
    let mut tally: Vec<(u32, f64)> = Vec::new();
    for (&l, &w) in labels.iter().zip(weights) {
        match tally.iter_mut().find(|(c, _)| *c == l) {
            Some((_, n)) => *n += w,
            None => tally.push((l, w)),
        }
    }
    tally.sort_by_key(|&(c, _)| c);
    let mut best: Option<(u32, f64)> = None;
    for (c, n) in tally {
        if best.is_none_or(|(_, b)| n > b) {
            best = Some((c, n));
        }
    }
    best.map(|(c, _)| c)
}

/// Weighted majority vote; the weights must sum to 1.
pub fn majority_vote(profile: &VoteProfile) -> Result<u32> {
    if profile.labels.is_empty() {
        return Err(Error::param("majority vote needs at least one vote"));
    }
    let total: f64 = profile.weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::param(format!("vote weights sum to {total}, expected 1")));
    }
    Ok(weighted_plurality(&profile.labels, &profile.weights).expect("non-empty profile"))
}

/// Pixel-wise equal-strength vote across per-scale prediction maps.
pub fn fuse_label_maps(maps: &[LabelMap]) -> Result<LabelMap> {
    let first = maps
        .first()
        .ok_or_else(|| Error::param("fusion needs at least one label map"))?;
    if maps
        .iter()
        .any(|m| m.rows() != first.rows() || m.cols() != first.cols())
    {
        return Err(Error::contract("label maps to fuse differ in size"));
    }
    let mut fused = Vec::with_capacity(first.labels().len());
    let mut votes = Vec::with_capacity(maps.len());
    for i in 0..first.labels().len() {
        votes.clear();
        votes.extend(maps.iter().map(|m| m.labels()[i]));
        fused.push(majority_vote(&VoteProfile::equal(votes.clone()))?);
    }
    LabelMap::new(first.rows(), first.cols(), fused)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plurality() {
        assert_eq!(majority_vote(&VoteProfile::equal(vec![2, 2, 3])).unwrap(), 2);
    }

    #[test]
    fn tie_goes_to_smallest_id() {
        assert_eq!(majority_vote(&VoteProfile::equal(vec![2, 1])).unwrap(), 1);
    }

    #[test]
    fn seven_votes() {
        let p = VoteProfile::equal(vec![1, 1, 2, 2, 2, 3, 3]);
        assert_eq!(majority_vote(&p).unwrap(), 2);
    }

    #[test]
    fn weights_must_sum_to_one() {
        let p = VoteProfile::weighted(vec![1, 2], vec![0.5, 0.6]).unwrap();
        assert!(matches!(majority_vote(&p), Err(Error::Parameter(_))));
        let p = VoteProfile::weighted(vec![1, 2], vec![0.3, 0.7]).unwrap();
        assert_eq!(majority_vote(&p).unwrap(), 2);
        assert!(majority_vote(&VoteProfile::equal(vec![])).is_err());
    }

    #[test]
    fn fuses_maps() {
        let a = LabelMap::new(1, 3, vec![1, 2, 3]).unwrap();
        let b = LabelMap::new(1, 3, vec![1, 3, 2]).unwrap();
        let c = LabelMap::new(1, 3, vec![2, 3, 2]).unwrap();
        assert_eq!(fuse_label_maps(&[a, b, c]).unwrap().labels(), &[1, 3, 2]);
    }
}
