//! Loading, validation, and persistence of RGB-D samples and saliency maps.
//!
//! Dataset layout: `<root>/rgb/<id>.<ext>`, `<root>/depth/<id>.<ext>` and an
//! optional `<root>/gt/<id>.<ext>`, with extensions png/jpg/jpeg/bmp. Samples
//! are matched across subdirectories by file stem.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use image::{DynamicImage, GrayImage, RgbImage};
use log::warn;

use crate::error::{Error, Result};
use crate::field::ScalarField;

pub const ACCEPTED_EXTENSIONS: [&str; 4] = ["png", "jpg", "jpeg", "bmp"];

/// One aligned RGB-D triple. Depth is normalized to [0,1] with 1.0 nearest
/// to the camera; the ground-truth mask, when present, holds exactly {0,1}.
#[derive(Debug, Clone)]
pub struct RgbdSample {
    pub id: String,
    pub rgb: RgbImage,
    pub depth: ScalarField,
    pub gt: Option<ScalarField>,
}

impl RgbdSample {
    pub fn width(&self) -> usize {
        self.rgb.width() as usize
    }

    pub fn height(&self) -> usize {
        self.rgb.height() as usize
    }
}

/// Per-pixel saliency in [0,1] at the resolution of the source sample.
#[derive(Debug, Clone)]
pub struct SaliencyMap {
    pub id: String,
    pub values: ScalarField,
}

impl SaliencyMap {
    pub fn new(id: impl Into<String>, values: ScalarField) -> Result<Self> {
        if let Some((min, max)) = values.min_max() {
            if min < 0.0 || max > 1.0 {
                return Err(Error::Domain(format!(
                    "saliency values outside [0,1]: range [{min}, {max}]"
                )));
            }
        }
        Ok(Self {
            id: id.into(),
            values,
        })
    }
}

/// Min-max normalize a raw depth plane to [0,1].
///
/// A constant plane carries no depth information and maps to all zeros,
/// mirroring the zero-confidence rule for degenerate depth statistics.
pub fn normalize_depth(raw: &[f64], width: usize, height: usize) -> Result<ScalarField> {
    let mut field = ScalarField::from_vec(width, height, raw.to_vec())?;
    field.min_max_normalize();
    Ok(field)
}

/// Load an aligned RGB/depth pair.
///
/// Depth is min-max normalized to [0,1] by its own extrema; with
/// `invert_depth`, `d := 1 - d` after normalization (for datasets where
/// bright means far). 8-bit and 16-bit grayscale depth images are accepted.
pub fn load_rgbd_pair(
    rgb_path: &Path,
    depth_path: &Path,
    invert_depth: bool,
) -> Result<RgbdSample> {
    let rgb = open_image(rgb_path)?.to_rgb8();
    let depth_img = open_image(depth_path)?.to_luma16();

    let (rw, rh) = (rgb.width() as usize, rgb.height() as usize);
    let (dw, dh) = (depth_img.width() as usize, depth_img.height() as usize);
    if (rw, rh) != (dw, dh) {
        return Err(Error::dims(
            format!("rgb {} vs depth {}", rgb_path.display(), depth_path.display()),
            (rw, rh),
            (dw, dh),
        ));
    }

    let raw: Vec<f64> = depth_img.pixels().map(|p| p.0[0] as f64).collect();
    let mut depth = normalize_depth(&raw, dw, dh)?;
    if invert_depth {
        depth.values_mut().iter_mut().for_each(|v| *v = 1.0 - *v);
    }

    let id = path_stem(rgb_path);
    Ok(RgbdSample {
        id,
        rgb,
        depth,
        gt: None,
    })
}

/// Load a binary ground-truth mask; pixels > 127 become 1.0.
pub fn load_ground_truth(path: &Path) -> Result<ScalarField> {
    let img = open_image(path)?.to_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = img
        .pixels()
        .map(|p| if p.0[0] > 127 { 1.0 } else { 0.0 })
        .collect();
    ScalarField::from_vec(w, h, data)
}

/// Read a stored saliency map back as values in [0,1].
pub fn read_saliency_map(path: &Path) -> Result<SaliencyMap> {
    let img = open_image(path)?.to_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = img.pixels().map(|p| p.0[0] as f64 / 255.0).collect();
    SaliencyMap::new(path_stem(path), ScalarField::from_vec(w, h, data)?)
}

/// Write a saliency map as single-channel 8-bit PNG, pixel = round(value * 255).
pub fn write_saliency_map(map: &SaliencyMap, path: &Path) -> Result<()> {
    let (w, h) = map.values.dims();
    let mut img = GrayImage::new(w as u32, h as u32);
    for y in 0..h {
        for x in 0..w {
            let v = (map.values.get(x, y) * 255.0).round().clamp(0.0, 255.0) as u8;
            img.put_pixel(x as u32, y as u32, image::Luma([v]));
        }
    }
    img.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

/// One enumerated dataset sample: paths matched by stem across subdirectories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetEntry {
    pub id: String,
    pub rgb_path: PathBuf,
    pub depth_path: PathBuf,
    pub gt_path: Option<PathBuf>,
}

/// Result of scanning a dataset root: matched entries plus the ids of rgb
/// files that had no depth partner.
#[derive(Debug, Clone, Default)]
pub struct DatasetScan {
    pub entries: Vec<DatasetEntry>,
    pub skipped: Vec<String>,
}

/// Enumerate `<root>/rgb` + `<root>/depth` (+ optional `<root>/gt`).
///
/// Entries are sorted lexicographically by id. RGB files without a matching
/// depth file are skipped and reported in `skipped`.
pub fn scan_dataset(root: &Path) -> Result<DatasetScan> {
    let rgb_dir = root.join("rgb");
    let depth_dir = root.join("depth");
    let gt_dir = root.join("gt");

    if !rgb_dir.is_dir() {
        return Err(Error::Config(format!(
            "dataset root {} has no rgb/ directory",
            root.display()
        )));
    }
    if !depth_dir.is_dir() {
        return Err(Error::Config(format!(
            "dataset root {} has no depth/ directory",
            root.display()
        )));
    }

    let rgb_files = list_images(&rgb_dir)?;
    let depth_files = list_images(&depth_dir)?;
    let gt_files = if gt_dir.is_dir() {
        list_images(&gt_dir)?
    } else {
        BTreeMap::new()
    };

    let mut scan = DatasetScan::default();
    for (id, rgb_path) in rgb_files {
        match depth_files.get(&id) {
            Some(depth_path) => scan.entries.push(DatasetEntry {
                gt_path: gt_files.get(&id).cloned(),
                id,
                rgb_path,
                depth_path: depth_path.clone(),
            }),
            None => {
                warn!("skipping '{id}': no matching depth image");
                scan.skipped.push(id);
            }
        }
    }
    if scan.entries.is_empty() {
        warn!("dataset {} matched no samples", root.display());
    }
    Ok(scan)
}

/// Map of file stem -> path for accepted image files, lexicographically ordered.
pub fn list_images(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        let Some(ext) = path.extension().and_then(|e| e.to_str()) else {
            continue;
        };
        if !ACCEPTED_EXTENSIONS.contains(&ext.to_ascii_lowercase().as_str()) {
            continue;
        }
        // First accepted extension wins per BTreeMap insertion; stems are
        // expected to be unique within a directory in practice.
        out.entry(path_stem(&path)).or_insert(path);
    }
    Ok(out)
}

fn open_image(path: &Path) -> Result<DynamicImage> {
    image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

fn path_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned())
}
