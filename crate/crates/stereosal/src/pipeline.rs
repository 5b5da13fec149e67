//! Per-image orchestration: depth confidence, superpixel graph, diffusion,
//! compactness and foreground stages, and the final weighted fusion.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::compactness::{compactness_stage, pixelize, DepthDamping};
use crate::confidence::{depth_confidence, validate_thresholds, DepthConfidence};
use crate::dataset::{RgbdSample, SaliencyMap};
use crate::diffusion::DiffusionOperator;
use crate::error::{Error, Result};
use crate::features::extract_features;
use crate::field::{min_max_normalized, ScalarField};
use crate::foreground::{finalize_foreground, foreground_contrast, select_seeds_drss, SeedSet};
use crate::graph::build_affinity;
use crate::slic::slic_segment;

/// All tunables of the per-image pipeline, with the standard defaults.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct PipelineConfig {
    /// Requested superpixel count.
    pub n_superpixels: usize,
    /// SLIC compactness parameter.
    pub slic_compactness: f64,
    /// SLIC k-means iterations.
    pub slic_iterations: usize,
    /// Bandwidth of the similarity kernels.
    pub sigma2: f64,
    /// Depth-level thresholds for the confidence entropy.
    pub levels: Vec<f64>,
    /// Seed-selection threshold on the normalized compactness scores.
    pub tau: f64,
    /// Fusion weight of the compactness map.
    pub gamma: f64,
    /// Manifold-ranking strength.
    pub alpha: f64,
    /// Flip the depth convention after normalization (bright-is-far inputs).
    pub invert_depth: bool,
    /// Smooth the affinity matrix before the compactness stage.
    pub diffusion: bool,
    /// Adjacency ring size (1 = direct neighbors).
    pub ring: u32,
    /// Optional precomputed objectness map; the center prior is used otherwise.
    pub objectness_map: Option<PathBuf>,
    /// Depth-refine the foreground seeds. Disabled only for ablation.
    pub drss: bool,
    /// Force the depth confidence to a fixed value (ablation only).
    pub lambda_override: Option<f64>,
    /// Depth term of the compactness damping factor (ablation only).
    #[serde(skip)]
    pub depth_damping: DepthDamping,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            n_superpixels: 200,
            slic_compactness: 10.0,
            slic_iterations: 10,
            sigma2: 0.1,
            levels: vec![0.4, 0.6],
            tau: 0.5,
            gamma: 0.8,
            alpha: 0.99,
            invert_depth: false,
            diffusion: true,
            ring: 1,
            objectness_map: None,
            drss: true,
            lambda_override: None,
            depth_damping: DepthDamping::Target,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_superpixels < 2 {
            return Err(Error::Config(format!(
                "n_superpixels must be at least 2, got {}",
                self.n_superpixels
            )));
        }
        if self.sigma2 <= 0.0 {
            return Err(Error::Config(format!(
                "sigma2 must be positive, got {}",
                self.sigma2
            )));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Config(format!(
                "gamma must lie in [0,1], got {}",
                self.gamma
            )));
        }
        if !(0.0..1.0).contains(&self.tau) {
            return Err(Error::Config(format!(
                "tau must lie in (0,1), got {}",
                self.tau
            )));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::Config(format!(
                "alpha must lie in [0,1), got {}",
                self.alpha
            )));
        }
        validate_thresholds(&self.levels)
    }
}

/// Wall-clock duration of each pipeline stage.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StageTimings {
    pub stages: Vec<(String, f64)>,
}

impl StageTimings {
    fn record(&mut self, stage: &str, start: Instant) {
        self.stages
            .push((stage.to_string(), start.elapsed().as_secs_f64() * 1e3));
    }

    pub fn total_ms(&self) -> f64 {
        self.stages.iter().map(|(_, ms)| ms).sum()
    }
}

/// Everything the pipeline produces for one image.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub compactness: SaliencyMap,
    pub foreground: SaliencyMap,
    pub fused: SaliencyMap,
    pub confidence: DepthConfidence,
    pub seeds: SeedSet,
    pub segmentation: crate::slic::SegmentationMap,
    pub timings: StageTimings,
}

impl PipelineOutput {
    pub fn n_superpixels(&self) -> usize {
        self.segmentation.len()
    }
}

/// Convex per-pixel combination `gamma * cs + (1 - gamma) * fs`.
///
/// Both inputs already live in [0,1], so the output does too and is not
/// renormalized.
pub fn fuse(cs: &SaliencyMap, fs: &SaliencyMap, gamma: f64) -> Result<SaliencyMap> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Config(format!("gamma must lie in [0,1], got {gamma}")));
    }
    if cs.values.dims() != fs.values.dims() {
        return Err(Error::dims(
            "fusing saliency maps",
            cs.values.dims(),
            fs.values.dims(),
        ));
    }
    let (w, h) = cs.values.dims();
    let data = cs
        .values
        .values()
        .iter()
        .zip(fs.values.values())
        .map(|(a, b)| gamma * a + (1.0 - gamma) * b)
        .collect();
    SaliencyMap::new(cs.id.clone(), ScalarField::from_vec(w, h, data)?)
}

/// Run the full two-stage pipeline on one sample.
///
/// Deterministic: identical input and config produce bit-identical maps.
pub fn run_pipeline(sample: &RgbdSample, config: &PipelineConfig) -> Result<PipelineOutput> {
    let objectness = match &config.objectness_map {
        Some(path) => Some(crate::dataset::read_saliency_map(path)?.values),
        None => None,
    };
    run_pipeline_with_objectness(sample, config, objectness.as_ref())
}

/// Same as [`run_pipeline`] but with the objectness prior supplied in memory.
pub fn run_pipeline_with_objectness(
    sample: &RgbdSample,
    config: &PipelineConfig,
    objectness: Option<&ScalarField>,
) -> Result<PipelineOutput> {
    config.validate()?;
    let mut timings = StageTimings::default();

    let start = Instant::now();
    let mut confidence = depth_confidence(&sample.depth, &config.levels)
        .map_err(|e| e.in_stage("depth-confidence"))?;
    if let Some(forced) = config.lambda_override {
        confidence.lambda_d = forced;
    }
    let lambda_d = confidence.lambda_d;
    timings.record("depth-confidence", start);

    let start = Instant::now();
    let n_superpixels = config.n_superpixels.min(sample.width() * sample.height());
    let seg = slic_segment(
        &sample.rgb,
        n_superpixels,
        config.slic_compactness,
        config.slic_iterations,
    )
    .map_err(|e| e.in_stage("slic"))?;
    timings.record("slic", start);

    let start = Instant::now();
    let features = extract_features(sample, &seg).map_err(|e| e.in_stage("features"))?;
    timings.record("features", start);

    let start = Instant::now();
    let graph = build_affinity(&features, &seg, lambda_d, config.sigma2, config.ring)
        .map_err(|e| e.in_stage("affinity"))?;
    timings.record("affinity", start);

    let start = Instant::now();
    let op = DiffusionOperator::new(&graph.weights, config.alpha)
        .map_err(|e| e.in_stage("diffusion"))?;
    let smoothed = if config.diffusion {
        Some(
            op.diffuse_affinity(&graph.affinity)
                .map_err(|e| e.in_stage("diffusion"))?,
        )
    } else {
        None
    };
    let compact_affinity = smoothed.as_ref().unwrap_or(&graph.affinity);
    timings.record("diffusion", start);

    let start = Instant::now();
    let compact = compactness_stage(
        compact_affinity,
        &features,
        &seg,
        lambda_d,
        config.sigma2,
        objectness,
        config.depth_damping,
    )
    .map_err(|e| e.in_stage("compactness"))?;
    let cs_map = pixelize(&compact.scores, &seg, sample.id.clone())
        .map_err(|e| e.in_stage("compactness"))?;
    timings.record("compactness", start);

    let start = Instant::now();
    let normalized_scores = min_max_normalized(&compact.scores);
    let mut seeds = select_seeds_drss(&normalized_scores, &features.mean_depths(), config.tau)
        .map_err(|e| e.in_stage("seeds"))?;
    if !config.drss {
        seeds.refined = seeds.preliminary.clone();
    }
    timings.record("seeds", start);

    let start = Instant::now();
    let contrast = foreground_contrast(&graph.affinity, &features, &seeds, config.sigma2)
        .map_err(|e| e.in_stage("foreground"))?;
    let fs_map = finalize_foreground(&contrast, &op, &seg, sample.id.clone())
        .map_err(|e| e.in_stage("foreground"))?;
    timings.record("foreground", start);

    let start = Instant::now();
    let fused = fuse(&cs_map, &fs_map, config.gamma).map_err(|e| e.in_stage("fusion"))?;
    timings.record("fusion", start);

    Ok(PipelineOutput {
        compactness: cs_map,
        foreground: fs_map,
        fused,
        confidence,
        seeds,
        segmentation: seg,
        timings,
    })
}
