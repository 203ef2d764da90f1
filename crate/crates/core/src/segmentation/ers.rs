//! Entropy-rate superpixels.
//!
//! Greedy maximization of `H(A) + α B(A)` over edge subsets `A` of the
//! lattice graph, where
//!
//! * `H(A)` is the entropy rate of the random walk that moves along selected
//!   edges with probability `w_ij / w_i` and keeps the mass of unselected
//!   incident edges on a self-loop, and
//! * `B(A) = H(Z_A) - N_A` rewards balanced component sizes (`Z_A` is the
//!   component-size distribution, `N_A` the number of components).
//!
//! Only edges joining two different components are ever added, so the
//! selected edges form a spanning forest and the stopping rule "exactly `S`
//! components" is reached after `P - S` merges. Both terms are monotone
//! submodular, so stale heap keys are upper bounds and a lazy priority queue
//! selects the same edge as an exhaustive scan.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::graph::SegmentationGraph;
use super::union_find::UnionFind;
use super::RegionMap;
use crate::error::{Error, Result};
use crate::scalar::{neg_x_log, Scalar};

/// Weight of the balancing term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha<T> {
    /// `S` times the ratio of the mean initial entropy-rate gain to the
    /// initial balancing gain, so the balancing pressure grows with the
    /// requested superpixel count.
    Auto,
    Fixed(T),
}

/// One accepted merge of the greedy sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge<T> {
    pub edge: usize,
    pub gain: T,
}

/// Record of a segmentation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ErsTrace<T> {
    pub alpha: T,
    pub merges: Vec<Merge<T>>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate<T> {
    gain: T,
    edge: usize,
}

impl<T: Scalar> PartialEq for Candidate<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Candidate<T> {}

impl<T: Scalar> PartialOrd for Candidate<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Candidate<T> {
    // larger gain first, then smaller edge index
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .partial_cmp(&other.gain)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.edge.cmp(&self.edge))
    }
}

struct Greedy<'g, T> {
    graph: &'g SegmentationGraph<T>,
    components: UnionFind,
    /// Unselected incident weight per vertex (the self-loop mass).
    self_loop: Vec<T>,
    total_weight: T,
    pixels: T,
    alpha: T,
}

impl<T: Scalar> Greedy<'_, T> {
    fn entropy_gain(&self, edge: usize) -> T {
        let (i, j) = self.graph.edges()[edge];
        let w = self.graph.weights()[edge];
        let vw = self.graph.vertex_weights();
        let vertex = |v: usize| {
            let r = self.self_loop[v];
            let rest = (r - w).max(T::zero());
            neg_x_log(w, vw[v]) + neg_x_log(rest, vw[v]) - neg_x_log(r, vw[v])
        };
        (vertex(i) + vertex(j)) / self.total_weight
    }

    fn balance_gain(&self, size_a: usize, size_b: usize) -> T {
        let n = self.pixels;
        let (a, b) = (T::of_usize(size_a), T::of_usize(size_b));
        let entropy_change = (neg_x_log(a + b, n) - neg_x_log(a, n) - neg_x_log(b, n)) / n;
        entropy_change + T::one()
    }

    fn gain(&mut self, edge: usize) -> T {
        let (i, j) = self.graph.edges()[edge];
        let (sa, sb) = (self.components.set_size(i), self.components.set_size(j));
        self.entropy_gain(edge) + self.alpha * self.balance_gain(sa, sb)
    }

    fn joins_components(&mut self, edge: usize) -> bool {
        let (i, j) = self.graph.edges()[edge];
        self.components.find(i) != self.components.find(j)
    }

    fn accept(&mut self, edge: usize) {
        let (i, j) = self.graph.edges()[edge];
        let w = self.graph.weights()[edge];
        self.self_loop[i] = (self.self_loop[i] - w).max(T::zero());
        self.self_loop[j] = (self.self_loop[j] - w).max(T::zero());
        self.components.union(i, j);
    }
}

/// Segments the lattice into exactly `superpixels` 4-connected regions.
pub fn ers_segment<T: Scalar>(
    graph: &SegmentationGraph<T>,
    superpixels: usize,
    alpha: Alpha<T>,
) -> Result<RegionMap> {
    ers_segment_traced(graph, superpixels, alpha).map(|(map, _)| map)
}

/// As [`ers_segment`], also returning the accepted merges in order.
pub fn ers_segment_traced<T: Scalar>(
    graph: &SegmentationGraph<T>,
    superpixels: usize,
    alpha: Alpha<T>,
) -> Result<(RegionMap, ErsTrace<T>)> {
    let p = graph.vertex_count();
    if superpixels == 0 || superpixels > p {
        return Err(Error::param(format!(
            "superpixel count must be in 1..={p}, got {superpixels}"
        )));
    }

    let mut greedy = Greedy {
        graph,
        components: UnionFind::new(p),
        self_loop: graph.vertex_weights().to_vec(),
        total_weight: graph.vertex_weights().iter().copied().sum(),
        pixels: T::of_usize(p),
        alpha: T::zero(),
    };

    let edge_count = graph.edges().len();
    let initial_entropy: Vec<T> = (0..edge_count).map(|e| greedy.entropy_gain(e)).collect();
    greedy.alpha = match alpha {
        Alpha::Fixed(a) if a >= T::zero() && a.is_finite() => a,
        Alpha::Fixed(a) => {
            return Err(Error::param(format!(
                "balancing weight must be non-negative and finite, got {a}"
            )))
        }
        Alpha::Auto => {
            let mean_h = initial_entropy.iter().copied().sum::<T>() / T::of_usize(edge_count);
            T::of_usize(superpixels) * mean_h / greedy.balance_gain(1, 1)
        }
    };

    let b0 = greedy.alpha * greedy.balance_gain(1, 1);
    let mut heap: BinaryHeap<Candidate<T>> = initial_entropy
        .iter()
        .enumerate()
        .map(|(edge, &h)| Candidate { gain: h + b0, edge })
        .collect();

    let mut merges = Vec::with_capacity(p - superpixels);
    while greedy.components.set_count() > superpixels {
        let Some(top) = heap.pop() else {
            return Err(Error::contract(format!(
                "graph ran out of edges with {} components left",
                greedy.components.set_count()
            )));
        };
        if !greedy.joins_components(top.edge) {
            continue;
        }
        let fresh = Candidate {
            gain: greedy.gain(top.edge),
            edge: top.edge,
        };
        let best = heap.peek().is_none_or(|next| fresh >= *next);
        if best {
            greedy.accept(fresh.edge);
            merges.push(Merge {
                edge: fresh.edge,
                gain: fresh.gain,
            });
        } else {
            heap.push(fresh);
        }
    }

    let mut roots = Vec::with_capacity(p);
    for v in 0..p {
        roots.push(greedy.components.find(v));
    }
    let map = RegionMap::from_raw_labels(graph.rows(), graph.cols(), &roots, true)?;
    Ok((
        map,
        ErsTrace {
            alpha: greedy.alpha,
            merges,
        },
    ))
}
