use proptest::prelude::*;

use superpca::classify::{majority_vote, split_samples, LabelMap, VoteProfile};
use superpca::cube::{GuideImage, HsiCube};
use superpca::io::{decode_hsif, encode_hsif, format_labels, parse_labels};
use superpca::metrics::confusion;
use superpca::multiscale::scale_schedule;
use superpca::segmentation::{build_graph, ers_segment, ers_segment_traced, Alpha, GraphSigma};
use superpca::superpca::{superpca_reduce_with, Centering};

fn cube32() -> impl Strategy<Value = HsiCube<f32>> {
    (1usize..5, 1usize..5, 1usize..4).prop_flat_map(|(r, c, b)| {
        prop::collection::vec(-1e6f32..1e6, r * c * b)
            .prop_map(move |data| HsiCube::new(r, c, b, data).unwrap())
    })
}

fn guide() -> impl Strategy<Value = GuideImage<f64>> {
    (1usize..6, 2usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(0.0f64..1.0, r * c)
            .prop_map(move |v| GuideImage::new(r, c, v).unwrap())
    })
}

fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Full objective recomputed from scratch for a set of selected edges.
fn objective(
    p: usize,
    edges: &[(usize, usize)],
    weights: &[f64],
    component: &[usize],
    selected: &[usize],
    alpha: f64,
) -> f64 {
    let mut vertex = vec![0.0; p];
    for (&(a, b), &w) in edges.iter().zip(weights) {
        vertex[a] += w;
        vertex[b] += w;
    }
    let total: f64 = vertex.iter().sum();
    let mut out = vec![Vec::new(); p];
    for &e in selected {
        out[edges[e].0].push(weights[e]);
        out[edges[e].1].push(weights[e]);
    }
    let h: f64 = (0..p)
        .map(|i| {
            let stay = vertex[i] - out[i].iter().sum::<f64>();
            vertex[i] / total
                * (out[i].iter().map(|&w| plogp(w / vertex[i])).sum::<f64>() + plogp(stay / vertex[i]))
        })
        .sum();
    let mut sizes = std::collections::HashMap::new();
    component.iter().for_each(|&c| *sizes.entry(c).or_insert(0usize) += 1);
    let b = sizes.values().map(|&n| plogp(n as f64 / p as f64)).sum::<f64>() - sizes.len() as f64;
    h + alpha * b
}

/// Replays `merges` against a plain rescan of every edge, checking that
/// each accepted edge has the largest recomputed gain. Exact ties are
/// decided by rounding, so any edge within `1e-12` of the best is accepted.
fn replay_is_greedy(
    graph: &superpca::segmentation::SegmentationGraph<f64>,
    merges: &[usize],
    alpha: f64,
) -> Result<(), String> {
    let p = graph.vertex_count();
    let (edges, weights) = (graph.edges(), graph.weights());
    let mut component: Vec<usize> = (0..p).collect();
    let mut selected: Vec<usize> = Vec::new();
    let gain_of = |component: &[usize], selected: &[usize], e: usize| {
        let base = objective(p, edges, weights, component, selected, alpha);
        let (from, to) = (component[edges[e].1], component[edges[e].0]);
        let merged: Vec<usize> = component.iter().map(|&c| if c == from { to } else { c }).collect();
        let mut with = selected.to_vec();
        with.push(e);
        objective(p, edges, weights, &merged, &with, alpha) - base
    };
    for (step, &chosen) in merges.iter().enumerate() {
        let (a, b) = edges[chosen];
        if component[a] == component[b] {
            return Err(format!("step {step}: edge {chosen} closes a cycle"));
        }
        let best = (0..edges.len())
            .filter(|&e| component[edges[e].0] != component[edges[e].1])
            .map(|e| gain_of(&component, &selected, e))
            .fold(f64::NEG_INFINITY, f64::max);
        let got = gain_of(&component, &selected, chosen);
        if got < best - 1e-12 {
            return Err(format!("step {step}: edge {chosen} gains {got}, best is {best}"));
        }
        let (from, to) = (component[b], component[a]);
        component.iter_mut().filter(|c| **c == from).for_each(|c| *c = to);
        selected.push(chosen);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hsif_round_trip_is_bit_exact(cube in cube32()) {
        let back: HsiCube<f32> = decode_hsif(&encode_hsif(&cube)).unwrap();
        let bits = |c: &HsiCube<f32>| c.data().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!((back.rows(), back.cols(), back.bands()), (cube.rows(), cube.cols(), cube.bands()));
        prop_assert_eq!(bits(&back), bits(&cube));
    }

    #[test]
    fn labels_round_trip((r, c, labels) in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), prop::collection::vec(0u32..20, r * c))
    })) {
        let map = LabelMap::new(r, c, labels).unwrap();
        prop_assert_eq!(parse_labels(&format_labels(&map)).unwrap(), map);
    }

    #[test]
    fn ers_region_count_and_connectivity(g in guide(), frac in 0.0f64..1.0) {
        let p = g.rows() * g.cols();
        let s = 1 + (frac * (p - 1) as f64) as usize;
        let graph = build_graph(&g, GraphSigma::Auto).unwrap();
        let map = ers_segment(&graph, s, Alpha::Auto).unwrap();
        prop_assert_eq!(map.region_count(), s);
        prop_assert!(map.regions_are_connected());
        prop_assert_eq!(&map, &ers_segment(&graph, s, Alpha::Auto).unwrap());
    }

    #[test]
    fn lazy_heap_takes_a_best_edge_each_step(g in guide(), frac in 0.0f64..1.0) {
        prop_assume!(g.rows() <= 4 && g.cols() <= 4);
        let p = g.rows() * g.cols();
        let s = 1 + (frac * (p - 1) as f64) as usize;
        let graph = build_graph(&g, GraphSigma::Auto).unwrap();
        let (_, trace) = ers_segment_traced(&graph, s, Alpha::Auto).unwrap();
        let lazy: Vec<usize> = trace.merges.iter().map(|m| m.edge).collect();
        prop_assert_eq!(lazy.len(), p - s);
        if let Err(msg) = replay_is_greedy(&graph, &lazy, trace.alpha) {
            prop_assert!(false, "{}", msg);
        }
    }

    #[test]
    fn schedule_is_symmetric(sf in 1usize..500, c in 0usize..6) {
        let sched = scale_schedule(sf, c, usize::MAX).unwrap();
        let counts = sched.counts();
        prop_assert_eq!(counts.len(), 2 * c + 1);
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        for k in 0..=c {
            let (lo, hi) = (counts[c - k] as f64, counts[c + k] as f64);
            if lo > 1.0 {
                let bound = sf as f64 * std::f64::consts::SQRT_2.powi(k as i32);
                prop_assert!((lo * hi - (sf * sf) as f64).abs() <= bound);
            }
        }
    }

    #[test]
    fn split_respects_cap(labels in prop::collection::vec(0u32..4, 2..80), t in 1usize..10, seed in 0u64..100) {
        let n = labels.len();
        let gt = LabelMap::new(1, n, labels.clone()).unwrap();
        let split = split_samples(&gt, t, seed).unwrap();
        for class in 1..4u32 {
            let size = labels.iter().filter(|&&l| l == class).count();
            let train = split.train.iter().filter(|&&i| labels[i] == class).count();
            let expected = if size < 2 { 0 } else { t.min(size / 2) };
            prop_assert_eq!(train, expected);
        }
        prop_assert!(split.train.iter().all(|i| !split.test.contains(i)));
        prop_assert!(split.train.iter().chain(&split.test).all(|&i| labels[i] != 0));
    }

    #[test]
    fn weighted_vote_is_order_free(votes in prop::collection::vec((1u32..4, 0.01f64..1.0), 1..7), shift in 0usize..7) {
        let total: f64 = votes.iter().map(|v| v.1).sum();
        let (l, w): (Vec<u32>, Vec<f64>) = votes.iter().map(|&(l, w)| (l, w / total)).unzip();
        let a = majority_vote(&VoteProfile::weighted(l.clone(), w.clone()).unwrap()).unwrap();
        let k = shift % l.len();
        let (mut l2, mut w2) = (l.clone(), w.clone());
        l2.rotate_left(k);
        w2.rotate_left(k);
        let b = majority_vote(&VoteProfile::weighted(l2, w2).unwrap()).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(l.contains(&a));
    }

    #[test]
    fn metric_ranges(pairs in prop::collection::vec((1u32..5, 1u32..5), 1..60)) {
        let (t, p): (Vec<u32>, Vec<u32>) = pairs.into_iter().unzip();
        let cm = confusion(&t, &p).unwrap();
        let oa = cm.oa().unwrap();
        prop_assert!((0.0..=1.0).contains(&oa));
        prop_assert!(cm.kappa().unwrap() <= 1.0 + 1e-12);
        let aa = cm.aa_observed().unwrap();
        prop_assert!((0.0..=1.0).contains(&aa));
    }

    #[test]
    fn centered_features_have_zero_region_mean(data in prop::collection::vec(-10.0f64..10.0, 36), d in 1usize..4) {
        let cube = HsiCube::new(3, 4, 3, data).unwrap();
        let raw = [0usize, 0, 1, 1, 0, 0, 1, 1, 2, 2, 2, 2];
        let map = superpca::RegionMap::from_raw_labels(3, 4, &raw, true).unwrap();
        let red = superpca_reduce_with(&cube, &map, d, Centering::RegionMean).unwrap();
        let m = red.cube().to_pixel_matrix();
        for members in map.regions() {
            for ch in 0..d {
                let mean: f64 = members.iter().map(|&i| m.column(i)[ch]).sum::<f64>() / members.len() as f64;
                prop_assert!(mean.abs() < 1e-9);
            }
        }
    }
}
