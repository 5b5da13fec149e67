//! Synthetic RGB-D scene generation.
//!
//! Produces aligned color/depth/ground-truth triples with controllable
//! geometry, texture, and depth quality. The examples run on these scenes
//! out of the box, and the test suites use them as fixtures with known
//! masks. Generation is deterministic for a fixed seed.

use image::RgbImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::RgbdSample;
use crate::field::ScalarField;

/// An axis-aligned rectangular region, sized in fractions of the image.
#[derive(Debug, Clone, Copy)]
pub struct RectRegion {
    /// Center as (x, y) fractions of width/height.
    pub center: (f64, f64),
    /// Extent as (w, h) fractions of width/height.
    pub size: (f64, f64),
    pub color: [u8; 3],
    /// Depth under the 1-is-near convention.
    pub depth: f64,
}

impl RectRegion {
    fn bounds(&self, width: usize, height: usize) -> (usize, usize, usize, usize) {
        let w = (self.size.0 * width as f64).round();
        let h = (self.size.1 * height as f64).round();
        let x0 = (self.center.0 * width as f64 - w / 2.0).round().max(0.0) as usize;
        let y0 = (self.center.1 * height as f64 - h / 2.0).round().max(0.0) as usize;
        let x1 = ((x0 as f64 + w) as usize).min(width);
        let y1 = ((y0 as f64 + h) as usize).min(height);
        (x0, y0, x1, y1)
    }

    fn contains(&self, x: usize, y: usize, width: usize, height: usize) -> bool {
        let (x0, y0, x1, y1) = self.bounds(width, height);
        x >= x0 && x < x1 && y >= y0 && y < y1
    }
}

/// Parameters of one synthetic scene.
#[derive(Debug, Clone)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub background_color: [u8; 3],
    pub background_depth: f64,
    /// Top-to-bottom depth ramp added to the background.
    pub depth_gradient: f64,
    /// Amplitude of the sinusoidal background texture (color units).
    pub texture_amplitude: f64,
    /// Amplitude of the uniform per-pixel color noise (color units).
    pub noise_amplitude: f64,
    pub depth_noise: f64,
    /// The salient object; also defines the ground-truth mask.
    pub object: RectRegion,
    /// Optional non-salient rectangle (e.g. a far color distractor).
    pub distractor: Option<RectRegion>,
    pub seed: u64,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            width: 320,
            height: 240,
            background_color: [72, 92, 112],
            background_depth: 0.22,
            depth_gradient: 0.12,
            texture_amplitude: 10.0,
            noise_amplitude: 6.0,
            depth_noise: 0.02,
            object: RectRegion {
                center: (0.5, 0.5),
                size: (0.3, 0.3),
                color: [202, 44, 40],
                depth: 0.88,
            },
            distractor: None,
            seed: 7,
        }
    }
}

/// Render the scene into an RGB-D sample with its ground-truth mask attached.
pub fn generate_scene(spec: &SceneSpec) -> RgbdSample {
    let (w, h) = (spec.width, spec.height);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut rgb = RgbImage::new(w as u32, h as u32);
    let mut depth = ScalarField::new(w, h);
    let mut gt = ScalarField::new(w, h);

    for y in 0..h {
        for x in 0..w {
            let in_object = spec.object.contains(x, y, w, h);
            let in_distractor = spec
                .distractor
                .map(|d| d.contains(x, y, w, h))
                .unwrap_or(false);

            let (base, base_depth, amp) = if in_object {
                (spec.object.color, spec.object.depth, spec.texture_amplitude * 0.5)
            } else if in_distractor {
                let d = spec.distractor.unwrap();
                (d.color, d.depth, spec.texture_amplitude * 0.5)
            } else {
                let ramp = spec.depth_gradient * (y as f64 / h.max(1) as f64);
                (
                    spec.background_color,
                    spec.background_depth + ramp,
                    spec.texture_amplitude,
                )
            };

            let wave = 0.5 * ((x as f64 * 0.61).sin() + (y as f64 * 0.43).sin());
            let jitter: f64 = rng.random_range(-spec.noise_amplitude..=spec.noise_amplitude);
            let shift = amp * wave + jitter;
            let px = [
                (base[0] as f64 + shift).clamp(0.0, 255.0) as u8,
                (base[1] as f64 + shift).clamp(0.0, 255.0) as u8,
                (base[2] as f64 + shift).clamp(0.0, 255.0) as u8,
            ];
            rgb.put_pixel(x as u32, y as u32, image::Rgb(px));

            let dn: f64 = rng.random_range(-spec.depth_noise..=spec.depth_noise);
            depth.set(x, y, (base_depth + dn).clamp(0.0, 1.0));
            if in_object {
                gt.set(x, y, 1.0);
            }
        }
    }

    RgbdSample {
        id: format!("synthetic-{}", spec.seed),
        rgb,
        depth,
        gt: Some(gt),
    }
}

/// Replace a depth map with a washed-out bright mosaic: random rectangular
/// cells with depths concentrated in the top level.
///
/// This is the classic failure mode of a bad depth map. Every value stays
/// above the top entropy threshold, so the confidence measure assigns it
/// zero weight, while the spurious cell boundaries actively mislead any
/// stage that still trusts the depth channel.
pub fn mosaic_corrupt_depth(width: usize, height: usize, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts_x = vec![0, width];
    let mut cuts_y = vec![0, height];
    for _ in 0..rng.random_range(3..6) {
        cuts_x.push(rng.random_range(1..width.max(2)));
    }
    for _ in 0..rng.random_range(2..5) {
        cuts_y.push(rng.random_range(1..height.max(2)));
    }
    cuts_x.sort_unstable();
    cuts_x.dedup();
    cuts_y.sort_unstable();
    cuts_y.dedup();

    let cell_depths: Vec<Vec<f64>> = (0..cuts_y.len() - 1)
        .map(|_| {
            (0..cuts_x.len() - 1)
                .map(|_| rng.random_range(0.70..0.97))
                .collect()
        })
        .collect();

    let mut depth = ScalarField::new(width, height);
    for y in 0..height {
        let cy = cuts_y.iter().take_while(|&&c| c <= y).count() - 1;
        for x in 0..width {
            let cx = cuts_x.iter().take_while(|&&c| c <= x).count() - 1;
            let jitter: f64 = rng.random_range(-0.01..=0.01);
            depth.set(x, y, (cell_depths[cy][cx] + jitter).clamp(0.65, 1.0));
        }
    }
    depth
}
