//! End-to-end experiment driver: filter, segment at every scale, reduce,
//! classify, fuse and score over repeated seeded splits.

use crate::classify::{
    classify_linear, fuse_label_maps, nn_classify, split_samples, train_linear_margin, LabelMap,
    SplitSpec,
};
use crate::cube::{weighted_mean_filter, FilterSigma, HsiCube, PixelMatrix};
use crate::error::{Error, Result};
use crate::metrics::confusion;
use crate::multiscale::{run_multiscale_with, scale_schedule, ScaleSchedule};
use crate::segmentation::Alpha;
use crate::superpca::{reduce, Centering, Method, ReduceConfig};

/// Tuned fundamental superpixel count and scale half-width for a scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub fundamental: usize,
    pub half_width: usize,
}

pub const PRESETS: [Preset; 3] = [
    Preset {
        name: "indian-pines",
        fundamental: 100,
        half_width: 4,
    },
    Preset {
        name: "pavia",
        fundamental: 20,
        half_width: 6,
    },
    Preset {
        name: "salinas",
        fundamental: 100,
        half_width: 4,
    },
];

pub fn preset(name: &str) -> Option<Preset> {
    PRESETS.iter().copied().find(|p| p.name == name)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classifier {
    NearestNeighbor,
    /// One-vs-rest hinge-loss classifiers.
    Linear { c_reg: f64, epochs: usize },
}

impl Classifier {
    pub fn name(self) -> &'static str {
        match self {
            Classifier::NearestNeighbor => "nn",
            Classifier::Linear { .. } => "linear",
        }
    }

    /// Labels for `test` after fitting on `train`. `seed` only matters for
    /// the linear classifier.
    pub fn predict(
        self,
        train: &PixelMatrix<f64>,
        labels: &[u32],
        test: &PixelMatrix<f64>,
        seed: u64,
    ) -> Result<Vec<u32>> {
        match self {
            Classifier::NearestNeighbor => nn_classify(train, labels, test),
            Classifier::Linear { c_reg, epochs } => {
                let model = train_linear_margin(train, labels, c_reg, epochs, seed)?;
                classify_linear(&model, test)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Filter {
    pub radius: usize,
    pub sigma: FilterSigma<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub fundamental: usize,
    pub half_width: usize,
    pub dim: usize,
    pub train_per_class: usize,
    /// Repeat `r` splits with seed `seed + r`.
    pub seed: u64,
    pub repeats: usize,
    pub classifier: Classifier,
    pub alpha: Alpha<f64>,
    pub centering: Centering,
    pub filter: Option<Filter>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            fundamental: 100,
            half_width: 4,
            dim: 30,
            train_per_class: 30,
            seed: 0,
            repeats: 10,
            classifier: Classifier::NearestNeighbor,
            alpha: Alpha::Auto,
            centering: Centering::default(),
            filter: None,
        }
    }
}

/// Accuracy figures of one prediction against ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub oa: f64,
    /// Mean recall over classes that have test pixels.
    pub aa: f64,
    pub kappa: f64,
    /// Indexed by class id - 1; `None` where the class has no test pixels.
    pub recall: Vec<Option<f64>>,
}

/// Scores `predicted` against `truth` on the given pixels, or on every
/// labeled pixel of `truth` when `pixels` is `None`.
pub fn evaluate(truth: &LabelMap, predicted: &LabelMap, pixels: Option<&[usize]>) -> Result<Evaluation> {
    if truth.rows() != predicted.rows() || truth.cols() != predicted.cols() {
        return Err(Error::contract(format!(
            "ground truth is {}x{}, prediction {}x{}",
            truth.rows(),
            truth.cols(),
            predicted.rows(),
            predicted.cols()
        )));
    }
    let owned;
    let pixels = match pixels {
        Some(p) => p,
        None => {
            owned = truth.labeled();
            &owned
        }
    };
    let t: Vec<u32> = pixels.iter().map(|&i| truth.labels()[i]).collect();
    let p: Vec<u32> = pixels.iter().map(|&i| predicted.labels()[i]).collect();
    if p.contains(&LabelMap::UNLABELED) {
        return Err(Error::contract("prediction leaves an evaluated pixel unlabeled"));
    }
    let cm = confusion(&t, &p)?;
    let mut recall = cm.per_class_recall();
    recall.truncate(truth.class_count() as usize);
    Ok(Evaluation {
        oa: cm.oa()?,
        aa: cm.aa_observed()?,
        kappa: cm.kappa()?,
        recall,
    })
}

/// Classifies every pixel of `features` after training on `split.train`.
pub fn classify_all(
    features: &HsiCube<f64>,
    truth: &LabelMap,
    split: &SplitSpec,
    classifier: Classifier,
) -> Result<LabelMap> {
    let m = features.to_pixel_matrix();
    let labels: Vec<u32> = split.train.iter().map(|&i| truth.labels()[i]).collect();
    let predicted = classifier.predict(&m.select(&split.train), &labels, &m, split.seed)?;
    LabelMap::new(features.rows(), features.cols(), predicted)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatResult {
    pub seed: u64,
    /// Overall accuracy of every scale, ordered like the schedule.
    pub scale_oa: Vec<f64>,
    pub fused: Evaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub schedule: ScaleSchedule,
    pub repeats: Vec<RepeatResult>,
    /// Fused prediction over all pixels from the first repeat.
    pub fused_map: LabelMap,
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl PipelineReport {
    pub fn scale_oa(&self, scale: usize) -> (f64, f64) {
        mean_std(&self.repeats.iter().map(|r| r.scale_oa[scale]).collect::<Vec<_>>())
    }

    pub fn fused_oa(&self) -> (f64, f64) {
        mean_std(&self.repeats.iter().map(|r| r.fused.oa).collect::<Vec<_>>())
    }

    pub fn fused_aa(&self) -> (f64, f64) {
        mean_std(&self.repeats.iter().map(|r| r.fused.aa).collect::<Vec<_>>())
    }

    pub fn fused_kappa(&self) -> (f64, f64) {
        mean_std(&self.repeats.iter().map(|r| r.fused.kappa).collect::<Vec<_>>())
    }

    /// Mean recall of each class over the repeats where it was tested.
    pub fn class_recall(&self) -> Vec<Option<f64>> {
        let classes = self.repeats.iter().map(|r| r.fused.recall.len()).max().unwrap_or(0);
        (0..classes)
            .map(|k| {
                let seen: Vec<f64> = self
                    .repeats
                    .iter()
                    .filter_map(|r| r.fused.recall.get(k).copied().flatten())
                    .collect();
                (!seen.is_empty()).then(|| mean_std(&seen).0)
            })
            .collect()
    }
}

fn check_truth(cube: &HsiCube<f64>, truth: &LabelMap) -> Result<()> {
    if cube.rows() != truth.rows() || cube.cols() != truth.cols() {
        return Err(Error::contract(format!(
            "cube is {}x{} but ground truth is {}x{}",
            cube.rows(),
            cube.cols(),
            truth.rows(),
            truth.cols()
        )));
    }
    Ok(())
}

/// Multiscale SuperPCA classification, repeated over seeded splits.
pub fn run_pipeline(cube: &HsiCube<f64>, truth: &LabelMap, config: &PipelineConfig) -> Result<PipelineReport> {
    check_truth(cube, truth)?;
    if config.repeats == 0 {
        return Err(Error::param("at least one repeat is required"));
    }
    let filtered;
    let cube = match config.filter {
        Some(f) => {
            filtered = weighted_mean_filter(cube, f.radius, f.sigma)?;
            &filtered
        }
        None => cube,
    };
    let schedule = scale_schedule(config.fundamental, config.half_width, cube.pixels())?;
    log::info!("superpixel schedule {:?}", schedule.counts());
    let ensemble = run_multiscale_with(cube, &schedule, config.dim, config.alpha, config.centering)?;

    let mut repeats = Vec::with_capacity(config.repeats);
    let mut fused_map = None;
    for r in 0..config.repeats {
        let seed = config.seed.wrapping_add(r as u64);
        let split = split_samples(truth, config.train_per_class, seed)?;
        let maps: Vec<LabelMap> = ensemble
            .reduced
            .iter()
            .map(|red| classify_all(red.cube(), truth, &split, config.classifier))
            .collect::<Result<_>>()?;
        let scale_oa = maps
            .iter()
            .map(|m| evaluate(truth, m, Some(&split.test)).map(|e| e.oa))
            .collect::<Result<Vec<_>>>()?;
        let fused = fuse_label_maps(&maps)?;
        let eval = evaluate(truth, &fused, Some(&split.test))?;
        log::debug!("repeat {r}: fused OA {:.4}", eval.oa);
        repeats.push(RepeatResult {
            seed,
            scale_oa,
            fused: eval,
        });
        fused_map.get_or_insert(fused);
    }
    Ok(PipelineReport {
        schedule,
        repeats,
        fused_map: fused_map.expect("at least one repeat"),
    })
}

/// Test-set overall accuracy of one single-scale reduction per repeat.
///
/// The reduction is computed once; repeat `r` uses split seed `seed + r`.
#[allow(clippy::too_many_arguments)]
pub fn single_scale_oa(
    cube: &HsiCube<f64>,
    truth: &LabelMap,
    method: Method,
    reduce_config: &ReduceConfig<f64>,
    train_per_class: usize,
    classifier: Classifier,
    seed: u64,
    repeats: usize,
) -> Result<Vec<f64>> {
    check_truth(cube, truth)?;
    let reduced = reduce(cube, method, reduce_config)?;
    (0..repeats)
        .map(|r| {
            let split = split_samples(truth, train_per_class, seed.wrapping_add(r as u64))?;
            let map = classify_all(reduced.cube(), truth, &split, classifier)?;
            evaluate(truth, &map, Some(&split.test)).map(|e| e.oa)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{generate, SceneConfig};

    fn small_scene() -> (HsiCube<f64>, LabelMap) {
        let scene = generate(&SceneConfig {
            rows: 16,
            cols: 16,
            bands: 8,
            seed: 5,
            ..SceneConfig::default()
        })
        .unwrap();
        (scene.cube, scene.truth)
    }

    #[test]
    fn presets() {
        assert_eq!(preset("pavia").unwrap().fundamental, 20);
        assert_eq!(preset("pavia").unwrap().half_width, 6);
        assert_eq!(preset("salinas").unwrap().fundamental, 100);
        assert!(preset("houston").is_none());
    }

    #[test]
    fn mean_std_population() {
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!((m, s), (2.0, 1.0));
    }

    #[test]
    fn single_scale_fusion_is_identity() {
        let (cube, truth) = small_scene();
        let config = PipelineConfig {
            fundamental: 6,
            half_width: 0,
            dim: 3,
            train_per_class: 5,
            repeats: 3,
            ..PipelineConfig::default()
        };
        let report = run_pipeline(&cube, &truth, &config).unwrap();
        assert_eq!(report.schedule.counts(), &[6]);
        for r in &report.repeats {
            assert_eq!(r.scale_oa, vec![r.fused.oa]);
        }
        assert_eq!(report, run_pipeline(&cube, &truth, &config).unwrap());
    }

    #[test]
    fn multiscale_report_shape() {
        let (cube, truth) = small_scene();
        let config = PipelineConfig {
            fundamental: 8,
            half_width: 1,
            dim: 3,
            train_per_class: 5,
            repeats: 2,
            classifier: Classifier::Linear {
                c_reg: 1.0,
                epochs: 20,
            },
            filter: Some(Filter {
                radius: 1,
                sigma: FilterSigma::Auto,
            }),
            ..PipelineConfig::default()
        };
        let report = run_pipeline(&cube, &truth, &config).unwrap();
        assert_eq!(report.repeats.len(), 2);
        assert!(report.repeats.iter().all(|r| r.scale_oa.len() == 3));
        assert_eq!(report.class_recall().len(), 4);
        let (oa, _) = report.fused_oa();
        assert!((0.0..=1.0).contains(&oa));
        assert!(report.fused_map.labels().iter().all(|&l| (1..=4).contains(&l)));
    }

    #[test]
    fn evaluate_all_labeled() {
        let truth = LabelMap::new(1, 4, vec![1, 2, 0, 2]).unwrap();
        let pred = LabelMap::new(1, 4, vec![1, 1, 3, 2]).unwrap();
        let e = evaluate(&truth, &pred, None).unwrap();
        assert!((e.oa - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.recall, vec![Some(1.0), Some(0.5)]);
        assert!((e.aa - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_mismatch_and_zero_repeats() {
        let (cube, truth) = small_scene();
        let other = LabelMap::unlabeled(4, 4);
        assert!(run_pipeline(&cube, &other, &PipelineConfig::default()).is_err());
        let config = PipelineConfig {
            repeats: 0,
            ..PipelineConfig::default()
        };
        assert!(run_pipeline(&cube, &truth, &config).is_err());
    }
}
