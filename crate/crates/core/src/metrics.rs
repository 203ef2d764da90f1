//! Confusion matrix, overall accuracy, average accuracy and Cohen's kappa.

use crate::error::{Error, Result};

/// `counts[i][j]`: test pixels of true class `i + 1` predicted as `j + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
    total: u64,
}

impl ConfusionMatrix {
    /// Builds a matrix from explicit row-major counts.
    pub fn from_counts(classes: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != classes * classes {
            return Err(Error::contract(format!(
                "{classes}-class confusion matrix needs {} counts, got {}",
                classes * classes,
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(Self {
            classes,
            counts,
            total,
        })
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Count for 1-based class ids.
    pub fn get(&self, truth: u32, predicted: u32) -> u64 {
        self.counts[(truth as usize - 1) * self.classes + predicted as usize - 1]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    fn row_sum(&self, i: usize) -> u64 {
        self.counts[i * self.classes..(i + 1) * self.classes].iter().sum()
    }

    fn col_sum(&self, j: usize) -> u64 {
        (0..self.classes).map(|i| self.counts[i * self.classes + j]).sum()
    }

    fn trace(&self) -> u64 {
        (0..self.classes).map(|i| self.counts[i * self.classes + i]).sum()
    }

    fn require_samples(&self) -> Result<()> {
        if self.total == 0 {
            Err(Error::param("confusion matrix is empty"))
        } else {
            Ok(())
        }
    }

    /// Overall accuracy: trace / n.
    pub fn oa(&self) -> Result<f64> {
        self.require_samples()?;
        Ok(self.trace() as f64 / self.total as f64)
    }

    /// Recall of each class; `None` for classes with no true samples.
    pub fn per_class_recall(&self) -> Vec<Option<f64>> {
        (0..self.classes)
            .map(|i| {
                let row = self.row_sum(i);
                (row > 0).then(|| self.counts[i * self.classes + i] as f64 / row as f64)
            })
            .collect()
    }

    /// Average accuracy: mean per-class recall. Every class must have true samples.
    pub fn aa(&self) -> Result<f64> {
        self.require_samples()?;
        let recalls = self.per_class_recall();
        if let Some(empty) = recalls.iter().position(Option::is_none) {
            return Err(Error::param(format!(
                "class {} has no true samples",
                empty + 1
            )));
        }
        Ok(recalls.iter().flatten().sum::<f64>() / self.classes as f64)
    }

    /// Mean recall over the classes that do have true samples.
    pub fn aa_observed(&self) -> Result<f64> {
        self.require_samples()?;
        let recalls: Vec<f64> = self.per_class_recall().into_iter().flatten().collect();
        Ok(recalls.iter().sum::<f64>() / recalls.len() as f64)
    }

    /// Cohen's kappa `(p_o - p_e) / (1 - p_e)`; defined as 0 when `p_e = 1`.
    pub fn kappa(&self) -> Result<f64> {
        self.require_samples()?;
        let n = u128::from(self.total);
        let chance: u128 = (0..self.classes)
            .map(|i| u128::from(self.row_sum(i)) * u128::from(self.col_sum(i)))
            .sum();
        let denom = n * n - chance;
        if denom == 0 {
            return Ok(0.0);
        }
        // n·trace - Σ row·col over n² - Σ row·col: same ratio, exact numerator
        let numer = (n * u128::from(self.trace())) as f64 - chance as f64;
        Ok(numer / denom as f64)
    }
}

/// Tallies predictions against truth; labels are 1-based class ids.
pub fn confusion(truth: &[u32], predicted: &[u32]) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::contract(format!(
            "{} true labels but {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    if truth.iter().chain(predicted).any(|&l| l == 0) {
        return Err(Error::param("class ids start at 1; 0 means unlabeled"));
    }
    let classes = truth.iter().chain(predicted).copied().max().unwrap_or(0) as usize;
    let mut counts = vec![0u64; classes * classes];
    for (&t, &p) in truth.iter().zip(predicted) {
        counts[(t as usize - 1) * classes + p as usize - 1] += 1;
    }
    ConfusionMatrix::from_counts(classes, counts)
}
