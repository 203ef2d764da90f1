use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Superpixelwise PCA toolkit for hyperspectral images.
///
/// Cubes use the HSIF format (JSON header line plus little-endian f32
/// samples, band-sequential); label grids are plain text.
#[derive(Debug, Parser)]
#[command(name = "superpca", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a whitespace-separated text export into an HSIF cube.
    Convert(ConvertArgs),
    /// Smooth a cube with the spectral-similarity weighted mean filter.
    Filter(FilterArgs),
    /// Partition a cube into regions and write the region grid.
    Segment(SegmentArgs),
    /// Reduce a cube to `dim` channels with one PCA per region.
    Reduce(ReduceArgs),
    /// Segment and reduce at every scale of a superpixel schedule.
    Multiscale(MultiscaleArgs),
    /// Train on a seeded split of the ground truth and label every pixel.
    Classify(ClassifyArgs),
    /// Pixel-wise equal-weight majority vote over prediction maps.
    Fuse(FuseArgs),
    /// Score a prediction against ground truth.
    Evaluate(EvaluateArgs),
    /// First-to-second eigenvalue ratio per region and globally.
    Ratios(RatiosArgs),
    /// Render a label grid as a PPM image.
    Render(RenderArgs),
    /// Full multiscale experiment: filter, segment, reduce, classify, fuse, score.
    Pipeline(PipelineArgs),
    /// Write a seeded synthetic scene and its ground truth.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Interleave {
    /// All bands of a pixel together, pixels in row-major order.
    Bip,
    /// One full band image after another.
    Bsq,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    /// Text file: `rows cols bands` followed by every sample.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = Interleave::Bip)]
    interleave: Interleave,
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Window half-width; the window is (2r+1) x (2r+1).
    #[arg(long, default_value_t = 2)]
    radius: usize,
    /// Similarity bandwidth: `auto`, `inf` or a positive number.
    #[arg(long, default_value = "auto")]
    sigma: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Superpca,
    Global,
    Square,
    Cluster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CenteringArg {
    /// Project raw spectra onto each region's directions.
    Origin,
    /// Subtract each region's mean spectrum first.
    RegionMean,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Superpca)]
    method: MethodArg,
    /// Superpixel, tile or cluster count.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    regions: u64,
    /// Balancing weight for superpixels; `auto` or a non-negative number.
    #[arg(long, default_value = "auto")]
    alpha: String,
    /// Seed for k-means clustering.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SegmentArgs {
    #[arg(long)]
    input: PathBuf,
    /// Region grid output; region ids are written starting at 1.
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    regions: RegionArgs,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    #[command(flatten)]
    regions: RegionArgs,
    /// Use this region grid instead of segmenting.
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CenteringArg::Origin)]
    centering: CenteringArg,
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    /// Scene preset supplying the fundamental count and half-width.
    #[arg(long, value_parser = ["indian-pines", "pavia", "salinas"])]
    preset: Option<String>,
    /// Fundamental superpixel count.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    sf: Option<u64>,
    /// Scale half-width C; 2C+1 scales are run.
    #[arg(long)]
    scales: Option<usize>,
}

#[derive(Debug, Args)]
struct MultiscaleArgs {
    #[arg(long)]
    input: PathBuf,
    /// Directory for `scale_<k>.hsif` and `map_<k>.txt`.
    #[arg(long)]
    output_dir: PathBuf,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    #[arg(long, default_value = "auto")]
    alpha: String,
    #[arg(long, value_enum, default_value_t = CenteringArg::Origin)]
    centering: CenteringArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassifierArg {
    Nn,
    Linear,
}

#[derive(Debug, Args)]
struct ClassifierArgs {
    #[arg(long, value_enum, default_value_t = ClassifierArg::Nn)]
    classifier: ClassifierArg,
    /// Regularization constant of the linear classifier.
    #[arg(long, default_value_t = 1.0)]
    c_reg: f64,
    /// Training epochs of the linear classifier.
    #[arg(long, default_value_t = 50)]
    epochs: usize,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Feature cube, usually the output of `reduce`.
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    gt: PathBuf,
    /// Prediction for every pixel.
    #[arg(long)]
    output: PathBuf,
    /// Training pixels per class (at most half of each class).
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    train: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    classifier: ClassifierArgs,
}

#[derive(Debug, Args)]
struct FuseArgs {
    /// Prediction grids to combine.
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    prediction: PathBuf,
    /// Score only the test pixels of this training size and seed.
    #[arg(long, requires = "seed", value_parser = clap::value_parser!(u64).range(1..))]
    train: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the figures as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RatiosArgs {
    #[arg(long)]
    input: PathBuf,
    /// Region grid; without it the cube is segmented with the options below.
    #[arg(long)]
    map: Option<PathBuf>,
    #[command(flatten)]
    regions: RegionArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    gt: PathBuf,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    train: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,
    #[command(flatten)]
    classifier: ClassifierArgs,
    #[arg(long, default_value = "auto")]
    alpha: String,
    #[arg(long, value_enum, default_value_t = CenteringArg::Origin)]
    centering: CenteringArg,
    /// Smooth the cube first with this window half-width.
    #[arg(long)]
    filter_radius: Option<usize>,
    #[arg(long, default_value = "auto")]
    filter_sigma: String,
    /// CSV destination; printed after the table when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Fused prediction of the first repeat as a label grid.
    #[arg(long)]
    map_output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    gt_output: PathBuf,
    #[arg(long, default_value_t = 48)]
    rows: usize,
    #[arg(long, default_value_t = 48)]
    cols: usize,
    #[arg(long, default_value_t = 20)]
    bands: usize,
    #[arg(long, default_value_t = 4)]
    regions: usize,
    /// Noise standard deviation as a fraction of the signal RMS.
    #[arg(long, default_value_t = 0.05)]
    noise_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn init_threads() -> Result<(), commands::Failure> {
    let Ok(raw) = std::env::var("SUPERPCA_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        commands::Failure::Usage(format!("SUPERPCA_THREADS must be a non-negative integer, got {raw:?}"))
    })?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| commands::Failure::Runtime(e.into()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| commands::run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(commands::Failure::Runtime(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
