//! Command-line front end: single-image runs, dataset batches, and scoring.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::error;

use stereosal::batch::{evaluate_directories, run_batch, run_single};
use stereosal::eval::DEFAULT_BETA2;
use stereosal::pipeline::PipelineConfig;

#[derive(Parser)]
#[command(name = "stereosal", version, about = "RGB-D saliency detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Process a single RGB/depth pair.
    Run {
        #[arg(long)]
        rgb: PathBuf,
        #[arg(long)]
        depth: PathBuf,
        /// Output directory for the saliency map(s) and manifest.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigFlags,
        /// Also write the compactness map, foreground map, and seed mask.
        #[arg(long)]
        emit_intermediate: bool,
    },
    /// Process every sample of a dataset directory (rgb/, depth/, gt/?).
    Batch {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigFlags,
        #[arg(long)]
        emit_intermediate: bool,
        /// Worker count; outputs are identical for any value.
        #[arg(long, default_value_t = num_workers())]
        jobs: usize,
    },
    /// Score predicted maps against ground-truth masks (matched by stem).
    Eval {
        #[arg(long)]
        pred_dir: PathBuf,
        #[arg(long)]
        gt_dir: PathBuf,
        /// Report CSV path; the PR curve goes to <stem>_pr.csv next to it.
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Args)]
struct ConfigFlags {
    #[arg(long, default_value_t = 200)]
    superpixels: usize,
    #[arg(long, default_value_t = 0.1)]
    sigma2: f64,
    /// Depth-level thresholds, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.4, 0.6])]
    levels: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = 0.8)]
    gamma: f64,
    #[arg(long, default_value_t = 0.99)]
    alpha: f64,
    #[arg(long, default_value_t = 10.0)]
    slic_compactness: f64,
    /// Adjacency ring size (2 links neighbors-of-neighbors).
    #[arg(long, default_value_t = 1)]
    ring: u32,
    /// Depth inputs are bright-is-far; flip after normalization.
    #[arg(long)]
    invert_depth: bool,
    /// Skip the affinity smoothing step.
    #[arg(long)]
    no_diffusion: bool,
    /// Precomputed objectness map (grayscale, image-sized).
    #[arg(long)]
    objectness_map: Option<PathBuf>,
}

impl From<ConfigFlags> for PipelineConfig {
    fn from(flags: ConfigFlags) -> Self {
        PipelineConfig {
            n_superpixels: flags.superpixels,
            sigma2: flags.sigma2,
            levels: flags.levels,
            tau: flags.tau,
            gamma: flags.gamma,
            alpha: flags.alpha,
            slic_compactness: flags.slic_compactness,
            ring: flags.ring,
            invert_depth: flags.invert_depth,
            diffusion: !flags.no_diffusion,
            objectness_map: flags.objectness_map,
            ..PipelineConfig::default()
        }
    }
}

fn num_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::default().filter_or("STEREOSAL_LOG", "info"),
    )
    .init();

    match Cli::parse().command {
        Command::Run {
            rgb,
            depth,
            out,
            config,
            emit_intermediate,
        } => {
            let config: PipelineConfig = config.into();
            match run_single(&rgb, &depth, &out, &config, emit_intermediate) {
                Ok(entry) => {
                    let mut manifest = stereosal::manifest::RunManifest::new(config);
                    manifest.samples.push(entry);
                    let path = out.join(stereosal::manifest::MANIFEST_FILENAME);
                    if let Err(e) = manifest.write(&path) {
                        error!("{e}");
                        return ExitCode::FAILURE;
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    error!("{e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Batch {
            dataset,
            out,
            config,
            emit_intermediate,
            jobs,
        } => match run_batch(&dataset, &out, &config.into(), jobs, emit_intermediate) {
            Ok(report) => {
                println!(
                    "processed {} samples ({} failed); manifest at {}",
                    report.succeeded + report.failed.len(),
                    report.failed.len(),
                    report.manifest_path.display()
                );
                if report.failed.is_empty() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => {
                error!("{e}");
                ExitCode::FAILURE
            }
        },
        Command::Eval {
            pred_dir,
            gt_dir,
            report,
        } => match evaluate_directories(&pred_dir, &gt_dir, &report, DEFAULT_BETA2) {
            Ok(result) => {
                println!(
                    "samples: {}  precision: {:.4}  recall: {:.4}  F: {:.4}  MAE: {:.4}",
                    result.rows.len(),
                    result.mean_precision,
                    result.mean_recall,
                    result.mean_f,
                    result.mean_mae
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                error!("{e}");
                ExitCode::FAILURE
            }
        },
    }
}
