//! One-vs-rest linear max-margin classifier.
//!
//! Each class gets a weight vector minimizing
//! `(λ/2)‖w‖² + (1/n) Σ max(0, 1 - y_i wᵀx_i)` with `λ = 1/C` and a
//! constant-1 feature for the bias. Features are standardized with training
//! statistics first. Each epoch takes one subgradient step on the full
//! averaged loss with step `1/(λ t)`; the per-epoch pass order comes from a
//! seeded shuffle. The iterate with the lowest objective so far is kept.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cube::PixelMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel<T> {
    classes: Vec<u32>,
    /// Per class: standardized-feature weights followed by the bias.
    weights: Vec<Vec<T>>,
    shift: Vec<T>,
    scale: Vec<T>,
    /// Per class: best objective after each epoch (non-increasing).
    objectives: Vec<Vec<T>>,
}

impl<T: Scalar> LinearModel<T> {
    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    pub fn objective_trace(&self, class_index: usize) -> &[T] {
        &self.objectives[class_index]
    }

    fn standardize(&self, x: &[T]) -> Vec<T> {
        let mut z: Vec<T> = x
            .iter()
            .zip(&self.shift)
            .zip(&self.scale)
            .map(|((&v, &m), &s)| (v - m) / s)
            .collect();
        z.push(T::one());
        z
    }

    /// Decision value of every class for `x`, in class order.
    pub fn decision_values(&self, x: &[T]) -> Vec<T> {
        let z = self.standardize(x);
        self.weights.iter().map(|w| dot(w, &z)).collect()
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn train_linear_margin<T: Scalar>(
    feats: &PixelMatrix<T>,
    labels: &[u32],
    c_reg: T,
    epochs: usize,
    seed: u64,
) -> Result<LinearModel<T>> {
    if labels.len() != feats.pixels() {
        return Err(Error::contract(format!(
            "{} samples but {} labels",
            feats.pixels(),
            labels.len()
        )));
    }
    if !(c_reg > T::zero()) || !c_reg.is_finite() {
        return Err(Error::param(format!(
            "regularization constant must be positive, got {c_reg}"
        )));
    }
    if epochs == 0 {
        return Err(Error::param("training needs at least one epoch"));
    }
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::param("linear classifier needs at least two classes"));
    }

    let n = feats.pixels();
    let dim = feats.bands();
    let nt = T::of_usize(n);
    let shift = feats.mean();
    let mut scale = vec![T::zero(); dim];
    for x in feats.columns() {
        for ((s, &v), &m) in scale.iter_mut().zip(x).zip(&shift) {
            *s = *s + (v - m) * (v - m);
        }
    }
    for s in &mut scale {
        let sd = (*s / nt).sqrt();
        *s = if sd > T::zero() { sd } else { T::one() };
    }

    let mut model = LinearModel {
        classes: classes.clone(),
        weights: Vec::with_capacity(classes.len()),
        shift,
        scale,
        objectives: Vec::with_capacity(classes.len()),
    };
    let z: Vec<Vec<T>> = feats.columns().map(|x| model.standardize(x)).collect();
    let lambda = T::one() / c_reg;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for &class in &classes {
        let y: Vec<T> = labels
            .iter()
            .map(|&l| if l == class { T::one() } else { -T::one() })
            .collect();
        let objective = |w: &[T]| -> T {
            let reg = lambda * dot(w, w) / T::of(2.0);
            let loss = (0..n)
                .map(|i| (T::one() - y[i] * dot(w, &z[i])).max(T::zero()))
                .sum::<T>()
                / nt;
            reg + loss
        };

        let mut w = vec![T::zero(); dim + 1];
        let mut best = w.clone();
        let mut best_obj = objective(&w);
        let mut trace = Vec::with_capacity(epochs);
        let radius = T::one() / lambda.sqrt();
        for t in 1..=epochs {
            order.shuffle(&mut rng);
            let mut grad = vec![T::zero(); dim + 1];
            for &i in &order {
                if y[i] * dot(&w, &z[i]) < T::one() {
                    for (g, &v) in grad.iter_mut().zip(&z[i]) {
                        *g = *g + y[i] * v;
                    }
                }
            }
            let eta = T::one() / (lambda * T::of_usize(t));
            let decay = T::one() - eta * lambda;
            for (wk, &g) in w.iter_mut().zip(&grad) {
                *wk = decay * *wk + eta * g / nt;
            }
            let norm = dot(&w, &w).sqrt();
            if norm > radius {
                let k = radius / norm;
                w.iter_mut().for_each(|v| *v = *v * k);
            }
            let obj = objective(&w);
            if obj < best_obj {
                best_obj = obj;
                best.copy_from_slice(&w);
            }
            trace.push(best_obj);
        }
        model.weights.push(best);
        model.objectives.push(trace);
    }
    Ok(model)
}

/// Argmax of the class decision values; ties go to the smaller class id.
pub fn classify_linear<T: Scalar>(
    model: &LinearModel<T>,
    feats: &PixelMatrix<T>,
) -> Result<Vec<u32>> {
    if feats.pixels() > 0 && feats.bands() != model.shift.len() {
        return Err(Error::contract(format!(
            "model expects {} features, got {}",
            model.shift.len(),
            feats.bands()
        )));
    }
    Ok(feats
        .columns()
        .map(|x| {
            let scores = model.decision_values(x);
            let mut best = 0;
            for k in 1..scores.len() {
                if scores[k] > scores[best] {
                    best = k;
                }
            }
            model.classes[best]
        })
        .collect())
}
