//! Single-image, batch, and scoring entry points shared by the CLI binary
//! and library users.
//!
//! Batch runs fan samples out over a worker pool. Each worker owns its
//! sample end to end and writes only its own output files; manifest rows are
//! collected in sample order afterwards, so outputs are identical for any
//! worker count.

use std::path::{Path, PathBuf};

use log::{error, info, warn};
use rayon::prelude::*;

use crate::dataset::{
    list_images, load_ground_truth, load_rgbd_pair, read_saliency_map, scan_dataset,
    write_saliency_map, DatasetEntry, SaliencyMap,
};
use crate::error::{Error, Result};
use crate::eval::{aggregate, evaluate_sample, write_pr_csv, write_report_csv, EvalReport};
use crate::field::ScalarField;
use crate::manifest::{RunManifest, SampleEntry, SampleStatus, MANIFEST_FILENAME};
use crate::pipeline::{run_pipeline, PipelineConfig, PipelineOutput};
use crate::slic::SegmentationMap;

/// Outcome of a batch run: manifest path plus per-sample failures.
#[derive(Debug)]
pub struct BatchReport {
    pub manifest_path: PathBuf,
    pub succeeded: usize,
    pub failed: Vec<(String, String)>,
}

/// Process one RGB/depth pair and write the fused map (plus intermediates
/// when requested) under `out_dir`. Returns the manifest entry.
pub fn run_single(
    rgb_path: &Path,
    depth_path: &Path,
    out_dir: &Path,
    config: &PipelineConfig,
    emit_intermediate: bool,
) -> Result<SampleEntry> {
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let sample = load_rgbd_pair(rgb_path, depth_path, config.invert_depth)?;
    let id = sample.id.clone();
    let output = run_pipeline(&sample, config)?;

    let final_path = out_dir.join(format!("{id}.png"));
    write_saliency_map(&output.fused, &final_path)?;

    let mut entry = SampleEntry {
        id: id.clone(),
        status: SampleStatus::Ok,
        output: Some(final_path),
        compactness_map: None,
        foreground_map: None,
        seed_map: None,
        lambda_d: Some(output.confidence.lambda_d),
        n_superpixels: Some(output.n_superpixels()),
        timings_ms: output.timings.stages.clone(),
        error: None,
    };

    if emit_intermediate {
        let cs_path = out_dir.join(format!("{id}_cs.png"));
        let fs_path = out_dir.join(format!("{id}_fs.png"));
        let seeds_path = out_dir.join(format!("{id}_seeds.png"));
        write_saliency_map(&output.compactness, &cs_path)?;
        write_saliency_map(&output.foreground, &fs_path)?;
        write_seed_visualization(&output, &seeds_path)?;
        entry.compactness_map = Some(cs_path);
        entry.foreground_map = Some(fs_path);
        entry.seed_map = Some(seeds_path);
    }
    Ok(entry)
}

/// Render the seed selection: refined seeds white, preliminary-only gray.
fn write_seed_visualization(output: &PipelineOutput, path: &Path) -> Result<()> {
    let map = seed_map_field(
        &output.seeds.preliminary,
        &output.seeds.refined,
        &output.segmentation,
    );
    write_saliency_map(
        &SaliencyMap::new(format!("{}-seeds", output.fused.id), map)?,
        path,
    )
}

fn seed_map_field(
    preliminary: &[usize],
    refined: &[usize],
    seg: &SegmentationMap,
) -> ScalarField {
    let mut field = ScalarField::new(seg.width(), seg.height());
    for y in 0..seg.height() {
        for x in 0..seg.width() {
            let label = seg.label(x, y) as usize;
            let v = if refined.binary_search(&label).is_ok() {
                1.0
            } else if preliminary.binary_search(&label).is_ok() {
                0.5
            } else {
                0.0
            };
            field.set(x, y, v);
        }
    }
    field
}

/// Run the pipeline over every matched sample of a dataset with up to
/// `jobs` concurrent workers. Individual failures are logged and recorded;
/// the batch continues.
pub fn run_batch(
    dataset_root: &Path,
    out_dir: &Path,
    config: &PipelineConfig,
    jobs: usize,
    emit_intermediate: bool,
) -> Result<BatchReport> {
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let scan = scan_dataset(dataset_root)?;
    for id in &scan.skipped {
        warn!("skipped '{id}' during scan (missing depth partner)");
    }
    info!(
        "processing {} samples with {} workers",
        scan.entries.len(),
        jobs.max(1)
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("failed to build worker pool: {e}")))?;

    let entries: Vec<SampleEntry> = pool.install(|| {
        scan.entries
            .par_iter()
            .map(|entry| process_entry(entry, out_dir, config, emit_intermediate))
            .collect()
    });

    let mut manifest = RunManifest::new(config.clone());
    let mut failed = Vec::new();
    let mut succeeded = 0usize;
    for entry in entries {
        if entry.status == SampleStatus::Failed {
            let reason = entry.error.clone().unwrap_or_default();
            error!("sample '{}' failed: {reason}", entry.id);
            failed.push((entry.id.clone(), reason));
        } else {
            succeeded += 1;
        }
        manifest.samples.push(entry);
    }
    let manifest_path = out_dir.join(MANIFEST_FILENAME);
    manifest.write(&manifest_path)?;

    Ok(BatchReport {
        manifest_path,
        succeeded,
        failed,
    })
}

fn process_entry(
    entry: &DatasetEntry,
    out_dir: &Path,
    config: &PipelineConfig,
    emit_intermediate: bool,
) -> SampleEntry {
    match run_single(
        &entry.rgb_path,
        &entry.depth_path,
        out_dir,
        config,
        emit_intermediate,
    ) {
        Ok(sample_entry) => sample_entry,
        Err(e) => SampleEntry {
            id: entry.id.clone(),
            status: SampleStatus::Failed,
            output: None,
            compactness_map: None,
            foreground_map: None,
            seed_map: None,
            lambda_d: None,
            n_superpixels: None,
            timings_ms: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Score a directory of predicted maps against a directory of ground-truth
/// masks (matched by stem) and write the report + PR-curve CSVs.
pub fn evaluate_directories(
    pred_dir: &Path,
    gt_dir: &Path,
    report_path: &Path,
    beta2: f64,
) -> Result<EvalReport> {
    let preds = list_images(pred_dir)?;
    let gts = list_images(gt_dir)?;

    let mut results = Vec::new();
    let mut excluded = Vec::new();
    for (id, pred_path) in &preds {
        let Some(gt_path) = gts.get(id) else {
            continue;
        };
        let pred = read_saliency_map(pred_path)?;
        let gt = load_ground_truth(gt_path)?;
        match evaluate_sample(&pred, &gt, beta2) {
            Ok(item) => results.push(item),
            Err(Error::EmptyGroundTruth { id }) => {
                warn!("excluding '{id}': ground truth has no positive pixels");
                excluded.push(id);
            }
            Err(e) => return Err(e),
        }
    }
    if results.is_empty() && excluded.is_empty() {
        return Err(Error::Config(format!(
            "no matching basenames between {} and {}",
            pred_dir.display(),
            gt_dir.display()
        )));
    }

    let report = aggregate(results, excluded)?;
    write_report_csv(&report, report_path)?;
    let pr_path = pr_curve_path(report_path);
    write_pr_csv(&report, &pr_path)?;
    info!(
        "evaluated {} samples: F = {:.4}, MAE = {:.4}",
        report.rows.len(),
        report.mean_f,
        report.mean_mae
    );
    Ok(report)
}

/// `report.csv -> report_pr.csv`, next to the main report.
pub fn pr_curve_path(report_path: &Path) -> PathBuf {
    let stem = report_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".to_string());
    report_path.with_file_name(format!("{stem}_pr.csv"))
}
