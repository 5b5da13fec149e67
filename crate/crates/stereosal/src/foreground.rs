//! Foreground saliency by multiple-cues contrast against depth-refined seeds.
//!
//! Seeds come from thresholding the compactness scores, then keeping only
//! those at least as near as the mean seed depth (salient objects sit close
//! to the camera; the refinement filters background leakage). Every
//! superpixel is then scored by its combined color/texture/position
//! similarity to the seed set, propagated over the graph, and normalized.

use log::warn;

use crate::dataset::SaliencyMap;
use crate::diffusion::DiffusionOperator;
use crate::error::{Error, Result};
use crate::features::SuperpixelSet;
use crate::field::min_max_normalized;
use crate::slic::SegmentationMap;

/// Foreground seed selection result.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SeedSet {
    /// Superpixels whose normalized compactness score exceeds tau. Sorted.
    pub preliminary: Vec<usize>,
    /// Preliminary seeds at least as near as the mean seed depth. Sorted.
    pub refined: Vec<usize>,
    /// Mean depth over the preliminary seeds.
    pub mean_seed_depth: f64,
}

/// Depth-refined seed selection.
///
/// `scores` must already be min-max normalized so the threshold means the
/// same thing on every image. Two fallbacks keep the set nonempty: an empty
/// preliminary set falls back to the top 10% of scores, and an empty refined
/// set falls back to the whole preliminary set.
pub fn select_seeds_drss(scores: &[f64], depths: &[f64], tau: f64) -> Result<SeedSet> {
    if scores.len() != depths.len() {
        return Err(Error::Domain(format!(
            "scores ({}) and depths ({}) differ in length",
            scores.len(),
            depths.len()
        )));
    }
    if scores.is_empty() {
        return Err(Error::Domain("cannot select seeds from zero superpixels".into()));
    }
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Config(format!("tau must lie in (0,1), got {tau}")));
    }

    let mut preliminary: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] > tau).collect();
    if preliminary.is_empty() {
        let k = (scores.len() as f64 * 0.1).ceil().max(1.0) as usize;
        let mut by_score: Vec<usize> = (0..scores.len()).collect();
        by_score.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        preliminary = by_score[..k].to_vec();
        preliminary.sort_unstable();
        warn!("no compactness score above {tau}; falling back to top {k} superpixels");
    }

    let mean_seed_depth =
        preliminary.iter().map(|&i| depths[i]).sum::<f64>() / preliminary.len() as f64;
    let mut refined: Vec<usize> = preliminary
        .iter()
        .copied()
        .filter(|&i| depths[i] >= mean_seed_depth)
        .collect();
    if refined.is_empty() {
        warn!("depth refinement removed every seed; keeping the preliminary set");
        refined = preliminary.clone();
    }

    Ok(SeedSet {
        preliminary,
        refined,
        mean_seed_depth,
    })
}

/// Cosine similarity of two LBP histograms, in [0,1].
///
/// A zero-norm histogram is degenerate and scores 0.
pub fn texture_similarity(hist_a: &[f64], hist_b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (a, b) in hist_a.iter().zip(hist_b) {
        dot += a * b;
        na += a * a;
        nb += b * b;
    }
    if na <= 0.0 || nb <= 0.0 {
        warn!("zero-norm LBP histogram in texture similarity");
        return 0.0;
    }
    dot.abs() / (na.sqrt() * nb.sqrt())
}

/// Multiple-cues contrast to the refined seeds:
/// `s_fg(i) = sum_{j in seeds} a_ij * D_t(i,j) * exp(-||b_i - b_j|| / sigma2) * n_j`.
///
/// Centroid distances are divided by the image diagonal before the kernel so
/// the exponent lives on the same [0,1] scale as the affinity distances.
pub fn foreground_contrast(
    affinity: &nalgebra::DMatrix<f64>,
    features: &SuperpixelSet,
    seeds: &SeedSet,
    sigma2: f64,
) -> Result<Vec<f64>> {
    if seeds.refined.is_empty() {
        return Err(Error::EmptySeeds);
    }
    if sigma2 <= 0.0 {
        return Err(Error::Config(format!(
            "sigma2 must be positive, got {sigma2}"
        )));
    }
    let n = features.len();
    let diag = features.image_diagonal();
    let mut out = vec![0.0f64; n];
    for i in 0..n {
        let fi = &features.superpixels[i];
        let mut sum = 0.0;
        for &j in &seeds.refined {
            let fj = &features.superpixels[j];
            let dx = fi.centroid[0] - fj.centroid[0];
            let dy = fi.centroid[1] - fj.centroid[1];
            let pos = (dx * dx + dy * dy).sqrt() / diag;
            sum += affinity[(i, j)]
                * texture_similarity(&fi.lbp_hist, &fj.lbp_hist)
                * (-pos / sigma2).exp()
                * fj.pixel_count as f64;
        }
        out[i] = sum;
    }
    Ok(out)
}

/// Normalize, propagate through the ranking operator, normalize again, and
/// spread onto pixels.
pub fn finalize_foreground(
    contrast: &[f64],
    op: &DiffusionOperator,
    seg: &SegmentationMap,
    id: impl Into<String>,
) -> Result<SaliencyMap> {
    let normalized = min_max_normalized(contrast);
    let propagated = op.manifold_rank(&normalized)?;
    let scores = min_max_normalized(&propagated);
    crate::compactness::pixelize(&scores, seg, id)
}
