//! Per-superpixel features: mean Lab color, mean depth, centroid, pixel
//! count, and an LBP texture histogram.

use image::RgbImage;

use crate::color::Lab;
use crate::dataset::RgbdSample;
use crate::error::{Error, Result};
use crate::slic::SegmentationMap;

pub const LBP_BINS: usize = 256;

/// Features of one superpixel.
#[derive(Debug, Clone)]
pub struct SuperpixelFeatures {
    /// Arithmetic mean of member-pixel Lab colors (raw Lab units).
    pub mean_lab: Lab,
    /// Mean normalized depth of member pixels, in [0,1].
    pub mean_depth: f64,
    /// Centroid (x, y) in pixel coordinates.
    pub centroid: [f64; 2],
    pub pixel_count: usize,
    /// 256-bin histogram of 8-neighbor radius-1 LBP codes; sums to `pixel_count`.
    pub lbp_hist: Vec<f64>,
}

/// Feature table for all superpixels of one segmentation.
#[derive(Debug, Clone)]
pub struct SuperpixelSet {
    pub superpixels: Vec<SuperpixelFeatures>,
    pub image_width: usize,
    pub image_height: usize,
}

impl SuperpixelSet {
    pub fn len(&self) -> usize {
        self.superpixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.superpixels.is_empty()
    }

    /// Geometric center of the image in the same coordinates as centroids.
    pub fn image_center(&self) -> [f64; 2] {
        [
            (self.image_width as f64 - 1.0) / 2.0,
            (self.image_height as f64 - 1.0) / 2.0,
        ]
    }

    /// Image diagonal in pixels; the natural scale for position distances.
    pub fn image_diagonal(&self) -> f64 {
        let w = self.image_width as f64;
        let h = self.image_height as f64;
        (w * w + h * h).sqrt()
    }

    pub fn mean_depths(&self) -> Vec<f64> {
        self.superpixels.iter().map(|s| s.mean_depth).collect()
    }
}

/// LBP code of one pixel: bit k set when neighbor k >= center.
///
/// Neighbors are the radius-1 ring starting top-left, clockwise. Coordinates
/// outside the image clamp to the border, so border pixels still produce a
/// code and every pixel contributes to its region's histogram.
pub fn lbp_code(gray: &[u8], width: usize, height: usize, x: usize, y: usize) -> u8 {
    const RING: [(i64, i64); 8] = [
        (-1, -1),
        (0, -1),
        (1, -1),
        (1, 0),
        (1, 1),
        (0, 1),
        (-1, 1),
        (-1, 0),
    ];
    let center = gray[y * width + x];
    let mut code = 0u8;
    for (bit, (dx, dy)) in RING.iter().enumerate() {
        let nx = (x as i64 + dx).clamp(0, width as i64 - 1) as usize;
        let ny = (y as i64 + dy).clamp(0, height as i64 - 1) as usize;
        if gray[ny * width + nx] >= center {
            code |= 1 << bit;
        }
    }
    code
}

fn luma(rgb: &RgbImage) -> Vec<u8> {
    rgb.pixels()
        .map(|p| {
            let [r, g, b] = p.0;
            (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64).round() as u8
        })
        .collect()
}

/// Extract per-superpixel features from a sample and its segmentation.
pub fn extract_features(sample: &RgbdSample, seg: &SegmentationMap) -> Result<SuperpixelSet> {
    let width = sample.width();
    let height = sample.height();
    if (seg.width(), seg.height()) != (width, height) {
        return Err(Error::dims(
            "segmentation vs sample",
            (width, height),
            (seg.width(), seg.height()),
        ));
    }

    let n = seg.len();
    let mut lab_sum = vec![[0.0f64; 3]; n];
    let mut depth_sum = vec![0.0f64; n];
    let mut pos_sum = vec![[0.0f64; 2]; n];
    let mut count = vec![0usize; n];
    let mut hist = vec![vec![0.0f64; LBP_BINS]; n];

    let gray = luma(&sample.rgb);

    for y in 0..height {
        for x in 0..width {
            let i = seg.label(x, y) as usize;
            let p = sample.rgb.get_pixel(x as u32, y as u32).0;
            let lab = Lab::from_srgb(p[0], p[1], p[2]);
            lab_sum[i][0] += lab.l;
            lab_sum[i][1] += lab.a;
            lab_sum[i][2] += lab.b;
            depth_sum[i] += sample.depth.get(x, y);
            pos_sum[i][0] += x as f64;
            pos_sum[i][1] += y as f64;
            count[i] += 1;
            hist[i][lbp_code(&gray, width, height, x, y) as usize] += 1.0;
        }
    }

    let superpixels = (0..n)
        .map(|i| {
            let c = count[i] as f64;
            SuperpixelFeatures {
                mean_lab: Lab {
                    l: lab_sum[i][0] / c,
                    a: lab_sum[i][1] / c,
                    b: lab_sum[i][2] / c,
                },
                mean_depth: depth_sum[i] / c,
                centroid: [pos_sum[i][0] / c, pos_sum[i][1] / c],
                pixel_count: count[i],
                lbp_hist: std::mem::take(&mut hist[i]),
            }
        })
        .collect();

    Ok(SuperpixelSet {
        superpixels,
        image_width: width,
        image_height: height,
    })
}
