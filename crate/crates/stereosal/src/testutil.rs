//! Shared helpers for unit tests.

use crate::color::Lab;
use crate::features::{SuperpixelFeatures, SuperpixelSet};

/// Build a feature table directly from centroids/counts/depths, with flat
/// single-bin textures unless the test overrides them.
pub(crate) fn toy_features(
    centroids: &[[f64; 2]],
    counts: &[usize],
    depths: &[f64],
    dims: (usize, usize),
) -> SuperpixelSet {
    let superpixels = centroids
        .iter()
        .zip(counts)
        .zip(depths)
        .map(|((&centroid, &pixel_count), &mean_depth)| SuperpixelFeatures {
            mean_lab: Lab::default(),
            mean_depth,
            centroid,
            pixel_count,
            lbp_hist: vec![1.0],
        })
        .collect();
    SuperpixelSet {
        superpixels,
        image_width: dims.0,
        image_height: dims.1,
    }
}
