use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use superpca::classify::{fuse_label_maps, split_samples, LabelMap};
use superpca::cube::{weighted_mean_filter, FilterSigma, HsiCube};
use superpca::io::{read_hsif, read_labels, render_map, write_hsif, write_labels};
use superpca::multiscale::{run_multiscale_with, scale_schedule};
use superpca::pipeline::{self, evaluate, Classifier, Evaluation, Filter, PipelineConfig};
use superpca::segmentation::{Alpha, RegionMap};
use superpca::superpca::{reduce, region_eigen_ratios, region_map_for, superpca_reduce_with, Centering, Method, ReduceConfig};
use superpca::synthetic::{generate, SceneConfig};

use crate::{
    CenteringArg, ClassifierArg, ClassifierArgs, Command, Interleave, MethodArg, RegionArgs, ScheduleArgs,
};

pub enum Failure {
    /// Bad arguments: exit code 2.
    Usage(String),
    /// Anything that went wrong while running: exit code 1.
    Runtime(anyhow::Error),
}

impl From<superpca::Error> for Failure {
    fn from(err: superpca::Error) -> Self {
        match err {
            superpca::Error::Parameter(msg) => Failure::Usage(msg),
            other => Failure::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure::Runtime(err)
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Convert(a) => convert(&a.input, &a.output, a.interleave),
        Command::Filter(a) => {
            let cube = load_cube(&a.input)?;
            let filtered = weighted_mean_filter(&cube, a.radius, parse_filter_sigma(&a.sigma)?)?;
            write_hsif(&filtered, &a.output)?;
            Ok(())
        }
        Command::Segment(a) => {
            let cube = load_cube(&a.input)?;
            let config = reduce_config(&a.regions, 1)?;
            let map = region_map_for(&cube, method(a.regions.method), &config)?;
            log::info!("{} regions", map.region_count());
            write_labels(&region_labels(&map), &a.output)?;
            Ok(())
        }
        Command::Reduce(a) => {
            let cube = load_cube(&a.input)?;
            let mut config = reduce_config(&a.regions, a.dim as usize)?;
            config.centering = centering(a.centering);
            let reduced = match &a.map {
                Some(path) => {
                    let map = load_region_map(path)?;
                    superpca_reduce_with(&cube, &map, config.dim, config.centering)?
                }
                None => reduce(&cube, method(a.regions.method), &config)?,
            };
            log::info!(
                "reduced {} bands to {} over {} regions",
                cube.bands(),
                reduced.channels(),
                reduced.region_map().region_count()
            );
            write_hsif(reduced.cube(), &a.output)?;
            Ok(())
        }
        Command::Multiscale(a) => {
            let cube = load_cube(&a.input)?;
            let (sf, c) = resolve_schedule(&a.schedule)?;
            let schedule = scale_schedule(sf, c, cube.pixels())?;
            log::info!("superpixel schedule {:?}", schedule.counts());
            let ens = run_multiscale_with(&cube, &schedule, a.dim as usize, parse_alpha(&a.alpha)?, centering(a.centering))?;
            fs::create_dir_all(&a.output_dir)
                .with_context(|| format!("creating {}", a.output_dir.display()))?;
            for (k, (map, red)) in ens.maps.iter().zip(&ens.reduced).enumerate() {
                write_hsif(red.cube(), a.output_dir.join(format!("scale_{k}.hsif")))?;
                write_labels(&region_labels(map), a.output_dir.join(format!("map_{k}.txt")))?;
            }
            Ok(())
        }
        Command::Classify(a) => {
            let features = load_cube(&a.features)?;
            let truth = read_labels(&a.gt)?;
            check_shape(&features, &truth)?;
            let split = split_samples(&truth, a.train as usize, a.seed)?;
            let predicted = pipeline::classify_all(&features, &truth, &split, classifier(&a.classifier)?)?;
            let eval = evaluate(&truth, &predicted, Some(&split.test))?;
            log::info!(
                "{} training pixels, test OA {:.4}",
                split.train.len(),
                eval.oa
            );
            write_labels(&predicted, &a.output)?;
            Ok(())
        }
        Command::Fuse(a) => {
            let maps = a
                .inputs
                .iter()
                .map(read_labels)
                .collect::<Result<Vec<_>, _>>()?;
            write_labels(&fuse_label_maps(&maps)?, &a.output)?;
            Ok(())
        }
        Command::Evaluate(a) => {
            let truth = read_labels(&a.gt)?;
            let predicted = read_labels(&a.prediction)?;
            let eval = match (a.train, a.seed) {
                (Some(t), Some(seed)) => {
                    let split = split_samples(&truth, t as usize, seed)?;
                    evaluate(&truth, &predicted, Some(&split.test))?
                }
                _ => evaluate(&truth, &predicted, None)?,
            };
            print!("{}", evaluation_table(&eval));
            if let Some(path) = &a.csv {
                write_text(path, &evaluation_csv(&eval))?;
            }
            Ok(())
        }
        Command::Ratios(a) => {
            let cube = load_cube(&a.input)?;
            let map = match &a.map {
                Some(path) => load_region_map(path)?,
                None => region_map_for(&cube, method(a.regions.method), &reduce_config(&a.regions, 1)?)?,
            };
            if map.rows() != cube.rows() || map.cols() != cube.cols() {
                return Err(Failure::Runtime(anyhow!(
                    "region map is {}x{} but cube is {}x{}",
                    map.rows(),
                    map.cols(),
                    cube.rows(),
                    cube.cols()
                )));
            }
            let report = region_eigen_ratios(&cube, &map)?;
            let mut table = String::from("region  ratio\n");
            let mut csv = String::from("region,ratio\n");
            for (id, r) in &report.regions {
                let _ = writeln!(table, "{:>6}  {r:.4}", id + 1);
                let _ = writeln!(csv, "{},{r:.6}", id + 1);
            }
            for (name, value) in [("global", report.global), ("mean", report.mean)] {
                if let Some(v) = value {
                    let _ = writeln!(table, "{name:>6}  {v:.4}");
                    let _ = writeln!(csv, "{name},{v:.6}");
                }
            }
            print!("{table}");
            if let Some(path) = &a.csv {
                write_text(path, &csv)?;
            }
            Ok(())
        }
        Command::Render(a) => {
            render_map(&read_labels(&a.labels)?, &a.output)?;
            Ok(())
        }
        Command::Pipeline(a) => {
            let cube = load_cube(&a.input)?;
            let truth = read_labels(&a.gt)?;
            check_shape(&cube, &truth)?;
            let (fundamental, half_width) = resolve_schedule(&a.schedule)?;
            let config = PipelineConfig {
                fundamental,
                half_width,
                dim: a.dim as usize,
                train_per_class: a.train as usize,
                seed: a.seed,
                repeats: a.repeats as usize,
                classifier: classifier(&a.classifier)?,
                alpha: parse_alpha(&a.alpha)?,
                centering: centering(a.centering),
                filter: match a.filter_radius {
                    Some(radius) => Some(Filter {
                        radius,
                        sigma: parse_filter_sigma(&a.filter_sigma)?,
                    }),
                    None => None,
                },
            };
            let report = pipeline::run_pipeline(&cube, &truth, &config)?;
            print!("{}", pipeline_table(&config, &report));
            let csv = pipeline_csv(&report);
            match &a.csv {
                Some(path) => write_text(path, &csv)?,
                None => print!("\n{csv}"),
            }
            if let Some(path) = &a.map_output {
                write_labels(&report.fused_map, path)?;
            }
            Ok(())
        }
        Command::Synth(a) => {
            let scene = generate(&SceneConfig {
                rows: a.rows,
                cols: a.cols,
                bands: a.bands,
                regions: a.regions,
                noise_fraction: a.noise_fraction,
                seed: a.seed,
                ..SceneConfig::default()
            })?;
            write_hsif(&scene.cube, &a.output)?;
            write_labels(&scene.truth, &a.gt_output)?;
            log::info!("noise sigma {:.3}", scene.noise_sigma);
            Ok(())
        }
    }
}

fn load_cube(path: &Path) -> Result<HsiCube<f64>, Failure> {
    Ok(read_hsif(path)?)
}

fn load_region_map(path: &Path) -> Result<RegionMap, Failure> {
    let grid = read_labels(path)?;
    let raw: Vec<usize> = grid.labels().iter().map(|&l| l as usize).collect();
    Ok(RegionMap::from_raw_labels(grid.rows(), grid.cols(), &raw, false)?)
}

/// Region ids shifted to start at 1 so no pixel reads as unlabeled.
fn region_labels(map: &RegionMap) -> LabelMap {
    let labels = map.labels().iter().map(|&l| l as u32 + 1).collect();
    LabelMap::new(map.rows(), map.cols(), labels).expect("sizes agree")
}

fn check_shape(cube: &HsiCube<f64>, truth: &LabelMap) -> Outcome {
    if cube.rows() != truth.rows() || cube.cols() != truth.cols() {
        return Err(Failure::Runtime(anyhow!(
            "dimension mismatch: cube is {}x{} but ground truth is {}x{}",
            cube.rows(),
            cube.cols(),
            truth.rows(),
            truth.cols()
        )));
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Superpca => Method::SuperPca,
        MethodArg::Global => Method::Global,
        MethodArg::Square => Method::Square,
        MethodArg::Cluster => Method::Cluster,
    }
}

fn centering(c: CenteringArg) -> Centering {
    match c {
        CenteringArg::Origin => Centering::Origin,
        CenteringArg::RegionMean => Centering::RegionMean,
    }
}

fn classifier(c: &ClassifierArgs) -> Result<Classifier, Failure> {
    Ok(match c.classifier {
        ClassifierArg::Nn => Classifier::NearestNeighbor,
        ClassifierArg::Linear => {
            if !(c.c_reg > 0.0 && c.c_reg.is_finite()) {
                return Err(usage(format!("--c-reg must be positive, got {}", c.c_reg)));
            }
            if c.epochs == 0 {
                return Err(usage("--epochs must be at least 1"));
            }
            Classifier::Linear {
                c_reg: c.c_reg,
                epochs: c.epochs,
            }
        }
    })
}

fn parse_alpha(raw: &str) -> Result<Alpha<f64>, Failure> {
    if raw == "auto" {
        return Ok(Alpha::Auto);
    }
    match raw.parse::<f64>() {
        Ok(a) if a >= 0.0 && a.is_finite() => Ok(Alpha::Fixed(a)),
        _ => Err(usage(format!("--alpha must be `auto` or a non-negative number, got {raw:?}"))),
    }
}

fn parse_filter_sigma(raw: &str) -> Result<FilterSigma<f64>, Failure> {
    match raw {
        "auto" => Ok(FilterSigma::Auto),
        "inf" => Ok(FilterSigma::Infinite),
        _ => match raw.parse::<f64>() {
            Ok(s) if s > 0.0 && s.is_finite() => Ok(FilterSigma::Fixed(s)),
            _ => Err(usage(format!("--sigma must be `auto`, `inf` or a positive number, got {raw:?}"))),
        },
    }
}

fn reduce_config(args: &RegionArgs, dim: usize) -> Result<ReduceConfig<f64>, Failure> {
    let mut config = ReduceConfig::new(dim, args.regions as usize);
    config.alpha = parse_alpha(&args.alpha)?;
    config.seed = args.seed;
    Ok(config)
}

/// Preset values, overridden by explicit flags.
fn resolve_schedule(args: &ScheduleArgs) -> Result<(usize, usize), Failure> {
    let preset = args.preset.as_deref().and_then(pipeline::preset);
    let sf = args
        .sf
        .map(|v| v as usize)
        .or(preset.map(|p| p.fundamental))
        .ok_or_else(|| usage("give --sf or --preset"))?;
    let c = args.scales.or(preset.map(|p| p.half_width)).unwrap_or(0);
    Ok((sf, c))
}

fn convert(input: &Path, output: &Path, interleave: Interleave) -> Outcome {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let mut tokens = text.split_whitespace().enumerate();
    let mut dim = |name: &str| -> Result<usize, Failure> {
        let (_, tok) = tokens
            .next()
            .ok_or_else(|| anyhow!("{}: missing {name} in the header", input.display()))?;
        tok.parse()
            .map_err(|_| Failure::Runtime(anyhow!("{}: {name} {tok:?} is not a count", input.display())))
    };
    let (rows, cols, bands) = (dim("rows")?, dim("cols")?, dim("bands")?);
    let mut values = Vec::with_capacity(rows * cols * bands);
    for (index, tok) in tokens {
        let v: f64 = tok.parse().map_err(|_| {
            anyhow!("{}: token {} ({tok:?}) is not a number", input.display(), index + 1)
        })?;
        values.push(v);
    }
    let expected = rows * cols * bands;
    if values.len() != expected {
        return Err(Failure::Runtime(anyhow!(
            "{}: header declares {expected} samples, found {}",
            input.display(),
            values.len()
        )));
    }
    let data = match interleave {
        Interleave::Bsq => values,
        Interleave::Bip => {
            let p = rows * cols;
            let mut out = vec![0.0; expected];
            for (i, v) in values.into_iter().enumerate() {
                out[(i % bands) * p + i / bands] = v;
            }
            out
        }
    };
    let cube = HsiCube::new(rows, cols, bands, data)?;
    write_hsif(&cube, output)?;
    Ok(())
}

fn evaluation_table(e: &Evaluation) -> String {
    let mut s = format!("OA     {:.4}\nAA     {:.4}\nKappa  {:.4}\n\nclass  recall\n", e.oa, e.aa, e.kappa);
    for (k, r) in e.recall.iter().enumerate() {
        let _ = match r {
            Some(r) => writeln!(s, "{:>5}  {r:.4}", k + 1),
            None => writeln!(s, "{:>5}  -", k + 1),
        };
    }
    s
}

fn evaluation_csv(e: &Evaluation) -> String {
    let mut s = format!("metric,class,value\noa,,{:.6}\naa,,{:.6}\nkappa,,{:.6}\n", e.oa, e.aa, e.kappa);
    for (k, r) in e.recall.iter().enumerate() {
        if let Some(r) = r {
            let _ = writeln!(s, "recall,{},{r:.6}", k + 1);
        }
    }
    s
}

fn pipeline_table(config: &PipelineConfig, report: &pipeline::PipelineReport) -> String {
    let mut s = format!(
        "protocol: T={} training pixels per class, {} repeats, {} classifier, d={}\nschedule: {:?}\n\n",
        config.train_per_class,
        config.repeats,
        config.classifier.name(),
        config.dim,
        report.schedule.counts()
    );
    s += "scale  superpixels  OA mean  OA std\n";
    let c = report.schedule.half_width() as i64;
    for (k, &count) in report.schedule.counts().iter().enumerate() {
        let (m, sd) = report.scale_oa(k);
        let _ = writeln!(s, "{:>5}  {count:>11}  {m:.4}   {sd:.4}", k as i64 - c);
    }
    s += "\nfused  mean    std\n";
    for (name, (m, sd)) in [
        ("OA", report.fused_oa()),
        ("AA", report.fused_aa()),
        ("Kappa", report.fused_kappa()),
    ] {
        let _ = writeln!(s, "{name:<5}  {m:.4}  {sd:.4}");
    }
    s += "\nclass  recall\n";
    for (k, r) in report.class_recall().iter().enumerate() {
        let _ = match r {
            Some(r) => writeln!(s, "{:>5}  {r:.4}", k + 1),
            None => writeln!(s, "{:>5}  -", k + 1),
        };
    }
    s
}

fn pipeline_csv(report: &pipeline::PipelineReport) -> String {
    let mut s = String::from("kind,index,superpixels,metric,mean,std\n");
    let c = report.schedule.half_width() as i64;
    for (k, &count) in report.schedule.counts().iter().enumerate() {
        let (m, sd) = report.scale_oa(k);
        let _ = writeln!(s, "scale,{},{count},oa,{m:.6},{sd:.6}", k as i64 - c);
    }
    for (name, (m, sd)) in [
        ("oa", report.fused_oa()),
        ("aa", report.fused_aa()),
        ("kappa", report.fused_kappa()),
    ] {
        let _ = writeln!(s, "fused,,,{name},{m:.6},{sd:.6}");
    }
    for (k, r) in report.class_recall().iter().enumerate() {
        if let Some(r) = r {
            let _ = writeln!(s, "class,{},,recall,{r:.6},", k + 1);
        }
    }
    s
}
