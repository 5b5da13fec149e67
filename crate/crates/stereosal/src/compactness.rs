//! Compactness saliency: salient regions have spatially concentrated color
//! and depth distributions, while background colors spread over the image.
//!
//! Each superpixel gets an affinity-and-size weighted spatial mean of all
//! superpixels, a color compactness (spread around that mean), and a depth
//! compactness (spread around the image center, damped for near regions in
//! proportion to depth confidence). Low combined spread plus a high object
//! prior makes a region salient.

use nalgebra::DMatrix;

use crate::dataset::SaliencyMap;
use crate::error::{Error, Result};
use crate::features::SuperpixelSet;
use crate::field::{min_max_normalize, ScalarField};
use crate::slic::SegmentationMap;

/// Which mean depth enters the damping factor of the depth-compactness sum.
///
/// `Target` uses the depth of the superpixel being scored (the default);
/// `Neighbor` uses the depth of each summand's superpixel instead. The
/// alternative exists for ablation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepthDamping {
    #[default]
    Target,
    Neighbor,
}

/// Intermediate vectors of the compactness stage.
#[derive(Debug, Clone)]
pub struct CompactnessResult {
    pub color_compactness: Vec<f64>,
    pub depth_compactness: Vec<f64>,
    pub spatial_means: Vec<[f64; 2]>,
    pub objectness: Vec<f64>,
    /// `(1 - minmax(cc + dc)) * obj`, elementwise in [0,1].
    pub scores: Vec<f64>,
}

/// Affinity-and-size weighted centroid of all superpixels, per superpixel:
/// `mu_i = sum_j a_ij n_j b_j / sum_j a_ij n_j`.
pub fn spatial_mean(affinity: &DMatrix<f64>, features: &SuperpixelSet) -> Vec<[f64; 2]> {
    let n = features.len();
    let mut means = vec![[0.0f64; 2]; n];
    for i in 0..n {
        let mut wx = 0.0;
        let mut wy = 0.0;
        let mut wsum = 0.0;
        for (j, s) in features.superpixels.iter().enumerate() {
            let w = affinity[(i, j)] * s.pixel_count as f64;
            wx += w * s.centroid[0];
            wy += w * s.centroid[1];
            wsum += w;
        }
        means[i] = [wx / wsum, wy / wsum];
    }
    means
}

/// Color compactness: weighted mean distance of centroids to the spatial
/// mean, `cc(i) = sum_j a_ij n_j ||b_j - mu_i|| / sum_j a_ij n_j`.
pub fn color_compactness(
    affinity: &DMatrix<f64>,
    features: &SuperpixelSet,
    means: &[[f64; 2]],
) -> Vec<f64> {
    let n = features.len();
    let mut cc = vec![0.0f64; n];
    for i in 0..n {
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, s) in features.superpixels.iter().enumerate() {
            let w = affinity[(i, j)] * s.pixel_count as f64;
            num += w * dist(s.centroid, means[i]);
            den += w;
        }
        cc[i] = num / den;
    }
    cc
}

/// Depth compactness: weighted mean distance of centroids to the image
/// center, damped by `exp(-lambda_d * d / sigma2)` so that near regions
/// (high depth under the 1-is-near convention) spread less and score as
/// more salient.
pub fn depth_compactness(
    affinity: &DMatrix<f64>,
    features: &SuperpixelSet,
    lambda_d: f64,
    sigma2: f64,
    damping: DepthDamping,
) -> Vec<f64> {
    let n = features.len();
    let center = features.image_center();
    let mut dc = vec![0.0f64; n];
    for i in 0..n {
        let di = features.superpixels[i].mean_depth;
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, s) in features.superpixels.iter().enumerate() {
            let w = affinity[(i, j)] * s.pixel_count as f64;
            let d = match damping {
                DepthDamping::Target => di,
                DepthDamping::Neighbor => s.mean_depth,
            };
            num += w * dist(s.centroid, center) * (-lambda_d * d / sigma2).exp();
            den += w;
        }
        dc[i] = num / den;
    }
    dc
}

/// Per-superpixel object prior.
///
/// With an external map, the prior is its mean over each superpixel's
/// pixels. Without one, a Gaussian center prior stands in:
/// `exp(-||b_i - p||^2 / (2 (0.25 diag)^2))`.
pub fn objectness_prior(
    features: &SuperpixelSet,
    seg: &SegmentationMap,
    external: Option<&ScalarField>,
) -> Result<Vec<f64>> {
    match external {
        Some(map) => {
            if map.dims() != (features.image_width, features.image_height) {
                return Err(Error::dims(
                    "objectness map vs image",
                    (features.image_width, features.image_height),
                    map.dims(),
                ));
            }
            if let Some((min, max)) = map.min_max() {
                if min < 0.0 || max > 1.0 {
                    return Err(Error::Domain(format!(
                        "objectness map values outside [0,1]: range [{min}, {max}]"
                    )));
                }
            }
            let mut sums = vec![0.0f64; features.len()];
            for y in 0..map.height() {
                for x in 0..map.width() {
                    sums[seg.label(x, y) as usize] += map.get(x, y);
                }
            }
            Ok(sums
                .iter()
                .zip(&features.superpixels)
                .map(|(s, f)| s / f.pixel_count as f64)
                .collect())
        }
        None => {
            let center = features.image_center();
            let scale = 0.25 * features.image_diagonal();
            let denom = 2.0 * scale * scale;
            Ok(features
                .superpixels
                .iter()
                .map(|s| {
                    let d = dist(s.centroid, center);
                    (-(d * d) / denom).exp()
                })
                .collect())
        }
    }
}

/// Combine the vectors: `s_cs = (1 - minmax(cc + dc)) * obj`.
pub fn compactness_scores(cc: &[f64], dc: &[f64], obj: &[f64]) -> Vec<f64> {
    let mut combined: Vec<f64> = cc.iter().zip(dc).map(|(a, b)| a + b).collect();
    min_max_normalize(&mut combined);
    combined
        .iter()
        .zip(obj)
        .map(|(c, o)| (1.0 - c) * o)
        .collect()
}

/// Spread per-superpixel scores onto pixels and min-max normalize the map.
pub fn pixelize(
    scores: &[f64],
    seg: &SegmentationMap,
    id: impl Into<String>,
) -> Result<SaliencyMap> {
    if scores.len() != seg.len() {
        return Err(Error::Domain(format!(
            "score vector length {} does not match {} regions",
            scores.len(),
            seg.len()
        )));
    }
    let mut field = ScalarField::new(seg.width(), seg.height());
    for y in 0..seg.height() {
        for x in 0..seg.width() {
            field.set(x, y, scores[seg.label(x, y) as usize]);
        }
    }
    field.min_max_normalize();
    SaliencyMap::new(id, field)
}

/// Full compactness stage on a diffused (or raw) affinity.
pub fn compactness_stage(
    affinity: &DMatrix<f64>,
    features: &SuperpixelSet,
    seg: &SegmentationMap,
    lambda_d: f64,
    sigma2: f64,
    external_objectness: Option<&ScalarField>,
    damping: DepthDamping,
) -> Result<CompactnessResult> {
    let means = spatial_mean(affinity, features);
    let cc = color_compactness(affinity, features, &means);
    let dc = depth_compactness(affinity, features, lambda_d, sigma2, damping);
    let obj = objectness_prior(features, seg, external_objectness)?;
    let scores = compactness_scores(&cc, &dc, &obj);
    Ok(CompactnessResult {
        color_compactness: cc,
        depth_compactness: dc,
        spatial_means: means,
        objectness: obj,
        scores,
    })
}

#[inline]
fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    (dx * dx + dy * dy).sqrt()
}
