//! SLIC superpixel segmentation.
//!
//! Iterative k-means in (L, a, b, x, y) space with grid-seeded centers and a
//! search window of 2S x 2S per center, followed by a connectivity pass that
//! absorbs orphan fragments into the largest adjacent region. Fully
//! deterministic: seeding is on a regular grid and there is no random state.

use image::RgbImage;

use crate::color::Lab;
use crate::error::{Error, Result};

/// Label image produced by SLIC. Labels are compact in `[0, n_actual)`,
/// every label is nonempty, and every labeled region is 4-connected.
#[derive(Debug, Clone)]
pub struct SegmentationMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    n_actual: usize,
}

impl SegmentationMap {
    /// Wrap an externally produced label image, validating the invariants:
    /// labels dense in `[0, N')`, every label nonempty, every region
    /// 4-connected.
    pub fn from_labels(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != width * height {
            return Err(Error::Domain(format!(
                "label buffer length {} does not match {}x{}",
                labels.len(),
                width,
                height
            )));
        }
        let n_actual = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut seen = vec![false; n_actual];
        for &l in &labels {
            seen[l as usize] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Domain("label range has gaps".into()));
        }

        // One 4-connected component per label.
        let mut visited = vec![false; labels.len()];
        let mut component_seen = vec![false; n_actual];
        let mut stack = Vec::new();
        for start in 0..labels.len() {
            if visited[start] {
                continue;
            }
            let label = labels[start] as usize;
            if component_seen[label] {
                return Err(Error::Domain(format!(
                    "label {label} is not 4-connected"
                )));
            }
            component_seen[label] = true;
            visited[start] = true;
            stack.push(start);
            while let Some(idx) = stack.pop() {
                let x = idx % width;
                let y = idx / width;
                let mut visit = |nidx: usize| {
                    if !visited[nidx] && labels[nidx] as usize == label {
                        visited[nidx] = true;
                        stack.push(nidx);
                    }
                };
                if x > 0 {
                    visit(idx - 1);
                }
                if x + 1 < width {
                    visit(idx + 1);
                }
                if y > 0 {
                    visit(idx - width);
                }
                if y + 1 < height {
                    visit(idx + width);
                }
            }
        }

        Ok(Self {
            width,
            height,
            labels,
            n_actual,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.n_actual
    }

    pub fn is_empty(&self) -> bool {
        self.n_actual == 0
    }

    #[inline]
    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Pixel count per label.
    pub fn region_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_actual];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }
}

#[derive(Clone, Copy)]
struct Center {
    l: f64,
    a: f64,
    b: f64,
    x: f64,
    y: f64,
}

/// Segment an RGB image into roughly `n_superpixels` compact regions.
///
/// `compactness` trades color adherence against spatial regularity; 10 is
/// the usual default for Lab inputs.
pub fn slic_segment(
    rgb: &RgbImage,
    n_superpixels: usize,
    compactness: f64,
    iterations: usize,
) -> Result<SegmentationMap> {
    let width = rgb.width() as usize;
    let height = rgb.height() as usize;
    if width < 2 || height < 2 {
        return Err(Error::Domain(format!(
            "image {width}x{height} too small to segment"
        )));
    }
    let n_pixels = width * height;
    if n_superpixels < 2 || n_superpixels > n_pixels {
        return Err(Error::Config(format!(
            "n_superpixels must be in [2, {n_pixels}], got {n_superpixels}"
        )));
    }
    if compactness <= 0.0 {
        return Err(Error::Config(format!(
            "compactness must be positive, got {compactness}"
        )));
    }

    let lab: Vec<Lab> = rgb
        .pixels()
        .map(|p| Lab::from_srgb(p.0[0], p.0[1], p.0[2]))
        .collect();

    let mut centers = seed_centers(&lab, width, height, n_superpixels);
    let step = (n_pixels as f64 / centers.len() as f64).sqrt().max(1.0);
    // Achanta-style distance: D^2 = d_lab^2 + (d_xy / S)^2 * m^2
    let spatial_weight = (compactness / step) * (compactness / step);

    let mut labels = vec![u32::MAX; n_pixels];
    let mut distances = vec![f64::INFINITY; n_pixels];

    for _ in 0..iterations {
        distances.iter_mut().for_each(|d| *d = f64::INFINITY);
        for (ci, c) in centers.iter().enumerate() {
            let x0 = (c.x - 2.0 * step).floor().max(0.0) as usize;
            let x1 = ((c.x + 2.0 * step).ceil() as usize).min(width - 1);
            let y0 = (c.y - 2.0 * step).floor().max(0.0) as usize;
            let y1 = ((c.y + 2.0 * step).ceil() as usize).min(height - 1);
            for y in y0..=y1 {
                let row = y * width;
                for x in x0..=x1 {
                    let idx = row + x;
                    let p = lab[idx];
                    let dl = p.l - c.l;
                    let da = p.a - c.a;
                    let db = p.b - c.b;
                    let dx = x as f64 - c.x;
                    let dy = y as f64 - c.y;
                    let d = dl * dl + da * da + db * db + (dx * dx + dy * dy) * spatial_weight;
                    if d < distances[idx] {
                        distances[idx] = d;
                        labels[idx] = ci as u32;
                    }
                }
            }
        }

        // Recompute centers from their assigned pixels.
        let mut acc = vec![(0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0usize); centers.len()];
        for y in 0..height {
            for x in 0..width {
                let idx = y * width + x;
                let l = labels[idx];
                if l == u32::MAX {
                    continue;
                }
                let a = &mut acc[l as usize];
                let p = lab[idx];
                a.0 += p.l;
                a.1 += p.a;
                a.2 += p.b;
                a.3 += x as f64;
                a.4 += y as f64;
                a.5 += 1;
            }
        }
        for (c, a) in centers.iter_mut().zip(&acc) {
            if a.5 > 0 {
                let n = a.5 as f64;
                *c = Center {
                    l: a.0 / n,
                    a: a.1 / n,
                    b: a.2 / n,
                    x: a.3 / n,
                    y: a.4 / n,
                };
            }
        }
    }

    // Centers whose windows never won a pixel can leave gaps; claim them by
    // nearest center so the connectivity pass starts from a full labeling.
    for idx in 0..n_pixels {
        if labels[idx] == u32::MAX {
            let x = (idx % width) as f64;
            let y = (idx / width) as f64;
            let mut best = (f64::INFINITY, 0u32);
            for (ci, c) in centers.iter().enumerate() {
                let dx = x - c.x;
                let dy = y - c.y;
                let d = dx * dx + dy * dy;
                if d < best.0 {
                    best = (d, ci as u32);
                }
            }
            labels[idx] = best.1;
        }
    }

    enforce_connectivity(&mut labels, width, height)
}

/// Place seeds at the cell centers of an `nx x ny` grid chosen to match the
/// image aspect ratio with `nx * ny >= k` as close to `k` as possible.
fn seed_centers(lab: &[Lab], width: usize, height: usize, k: usize) -> Vec<Center> {
    let aspect = width as f64 / height as f64;
    let mut nx = ((k as f64 * aspect).sqrt().round() as usize).max(1);
    nx = nx.min(width).max(1);
    let mut ny = k.div_ceil(nx).max(1);
    ny = ny.min(height);
    // Make sure the grid can hold k seeds even for extreme aspect ratios.
    while nx * ny < k && nx < width {
        nx += 1;
        ny = k.div_ceil(nx).min(height);
    }

    let mut centers = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            if centers.len() == k {
                break;
            }
            let x = (i as f64 + 0.5) * width as f64 / nx as f64;
            let y = (j as f64 + 0.5) * height as f64 / ny as f64;
            let xi = (x as usize).min(width - 1);
            let yi = (y as usize).min(height - 1);
            let p = lab[yi * width + xi];
            centers.push(Center {
                l: p.l,
                a: p.a,
                b: p.b,
                x: xi as f64,
                y: yi as f64,
            });
        }
    }
    centers
}

/// Split the raw assignment into 4-connected components, keep the largest
/// component of each label, and merge every remaining fragment into the
/// largest edge-adjacent kept region. Output labels are compacted to `[0, N')`.
fn enforce_connectivity(
    labels: &mut [u32],
    width: usize,
    height: usize,
) -> Result<SegmentationMap> {
    let n_pixels = width * height;
    let mut comp = vec![u32::MAX; n_pixels];
    let mut comp_label = Vec::new();
    let mut comp_pixels: Vec<Vec<u32>> = Vec::new();
    let mut stack = Vec::new();

    for start in 0..n_pixels {
        if comp[start] != u32::MAX {
            continue;
        }
        let cid = comp_label.len() as u32;
        let label = labels[start];
        comp_label.push(label);
        let mut pixels = Vec::new();
        comp[start] = cid;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            pixels.push(idx as u32);
            let x = idx % width;
            let y = idx / width;
            let mut visit = |nidx: usize| {
                if comp[nidx] == u32::MAX && labels[nidx] == label {
                    comp[nidx] = cid;
                    stack.push(nidx);
                }
            };
            if x > 0 {
                visit(idx - 1);
            }
            if x + 1 < width {
                visit(idx + 1);
            }
            if y > 0 {
                visit(idx - width);
            }
            if y + 1 < height {
                visit(idx + width);
            }
        }
        comp_pixels.push(pixels);
    }

    let n_comps = comp_label.len();
    let comp_size: Vec<usize> = comp_pixels.iter().map(|p| p.len()).collect();

    // The largest component of each label survives as a region of its own.
    let n_labels = comp_label.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut main_comp: Vec<Option<u32>> = vec![None; n_labels];
    for cid in 0..n_comps {
        let label = comp_label[cid] as usize;
        match main_comp[label] {
            Some(prev) if comp_size[prev as usize] >= comp_size[cid] => {}
            _ => main_comp[label] = Some(cid as u32),
        }
    }
    let is_main: Vec<bool> = (0..n_comps)
        .map(|cid| main_comp[comp_label[cid] as usize] == Some(cid as u32))
        .collect();

    let mut target: Vec<u32> = (0..n_comps as u32).collect();
    let resolve = |target: &[u32], mut c: u32| -> u32 {
        while target[c as usize] != c {
            c = target[c as usize];
        }
        c
    };

    // Orphans merge into the largest edge-adjacent absorbed region, smallest
    // fragment first. A fragment wholly surrounded by other fragments waits
    // for a later pass; anything still unattached at fixpoint becomes its
    // own region so the partition stays total.
    let mut pending: Vec<u32> = (0..n_comps as u32)
        .filter(|&c| !is_main[c as usize])
        .collect();
    pending.sort_by_key(|&c| (comp_size[c as usize], c));

    loop {
        let mut unattached = Vec::new();
        for &orphan in &pending {
            let mut best: Option<(usize, u32)> = None;
            for &pidx in &comp_pixels[orphan as usize] {
                let idx = pidx as usize;
                let x = idx % width;
                let y = idx / width;
                let mut consider = |nidx: usize| {
                    let ncomp = resolve(&target, comp[nidx]);
                    if ncomp != orphan && is_main[ncomp as usize] {
                        let sz = comp_size[ncomp as usize];
                        if best.is_none_or(|(bsz, bc)| sz > bsz || (sz == bsz && ncomp < bc)) {
                            best = Some((sz, ncomp));
                        }
                    }
                };
                if x > 0 {
                    consider(idx - 1);
                }
                if x + 1 < width {
                    consider(idx + 1);
                }
                if y > 0 {
                    consider(idx - width);
                }
                if y + 1 < height {
                    consider(idx + width);
                }
            }
            match best {
                Some((_, dest)) => target[orphan as usize] = dest,
                None => unattached.push(orphan),
            }
        }
        if unattached.len() == pending.len() {
            break;
        }
        pending = unattached;
    }

    // Compact surviving components to dense labels, scan order.
    let mut remap = vec![u32::MAX; n_comps];
    let mut next = 0u32;
    for idx in 0..n_pixels {
        let c = resolve(&target, comp[idx]) as usize;
        if remap[c] == u32::MAX {
            remap[c] = next;
            next += 1;
        }
        labels[idx] = remap[c];
    }

    Ok(SegmentationMap {
        width,
        height,
        labels: labels.to_vec(),
        n_actual: next as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_image(w: u32, h: u32, rgb: [u8; 3]) -> RgbImage {
        RgbImage::from_pixel(w, h, image::Rgb(rgb))
    }

    fn two_halves(w: u32, h: u32, left: [u8; 3], right: [u8; 3]) -> RgbImage {
        RgbImage::from_fn(w, h, |x, _| {
            if x < w / 2 {
                image::Rgb(left)
            } else {
                image::Rgb(right)
            }
        })
    }

    fn assert_partition(seg: &SegmentationMap) {
        let sizes = seg.region_sizes();
        assert_eq!(sizes.iter().sum::<usize>(), seg.width() * seg.height());
        assert!(sizes.iter().all(|&s| s > 0), "empty label present");
    }

    fn assert_connected(seg: &SegmentationMap) {
        // Each label must form a single 4-connected component.
        let (w, h) = (seg.width(), seg.height());
        let mut seen_root = vec![usize::MAX; seg.len()];
        let mut visited = vec![false; w * h];
        for start in 0..w * h {
            if visited[start] {
                continue;
            }
            let label = seg.labels()[start] as usize;
            assert_eq!(
                seen_root[label],
                usize::MAX,
                "label {label} split into multiple components"
            );
            seen_root[label] = start;
            let mut stack = vec![start];
            visited[start] = true;
            while let Some(idx) = stack.pop() {
                let x = idx % w;
                let y = idx / w;
                for (nx, ny) in [
                    (x.wrapping_sub(1), y),
                    (x + 1, y),
                    (x, y.wrapping_sub(1)),
                    (x, y + 1),
                ] {
                    if nx < w && ny < h {
                        let nidx = ny * w + nx;
                        if !visited[nidx] && seg.labels()[nidx] as usize == label {
                            visited[nidx] = true;
                            stack.push(nidx);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_image_splits_into_near_equal_quadrants() {
        let img = uniform_image(100, 100, [80, 80, 80]);
        let seg = slic_segment(&img, 4, 10.0, 10).unwrap();
        assert_eq!(seg.len(), 4);
        assert_partition(&seg);
        assert_connected(&seg);
        let sizes = seg.region_sizes();
        let (min, max) = (
            *sizes.iter().min().unwrap() as f64,
            *sizes.iter().max().unwrap() as f64,
        );
        assert!(max / min <= 2.0, "areas too uneven: {sizes:?}");
    }

    #[test]
    fn two_color_halves_split_on_the_color_edge() {
        let img = two_halves(100, 50, [200, 40, 40], [40, 60, 200]);
        let seg = slic_segment(&img, 2, 10.0, 10).unwrap();
        assert_eq!(seg.len(), 2);
        assert_partition(&seg);
        assert_connected(&seg);
        // Oracle: within each region the color must be flat, which pins the
        // boundary to the color edge within a 2 px band.
        for y in 0..50 {
            for x in 0..100 {
                if (x as i64 - 50).abs() > 2 {
                    let expected = seg.label(if x < 50 { 0 } else { 99 }, y);
                    assert_eq!(
                        seg.label(x, y),
                        expected,
                        "pixel ({x},{y}) on the wrong side"
                    );
                }
            }
        }
    }

    #[test]
    fn partition_property_on_textured_input() {
        let img = RgbImage::from_fn(64, 48, |x, y| {
            image::Rgb([
                ((x * 7 + y * 13) % 256) as u8,
                ((x * 3 + y * 5) % 256) as u8,
                ((x + y) % 256) as u8,
            ])
        });
        let seg = slic_segment(&img, 24, 10.0, 10).unwrap();
        assert_partition(&seg);
        assert_connected(&seg);
        assert!(seg.len() >= 2 && seg.len() <= 64 * 48);
    }

    #[test]
    fn tiny_image_rejected() {
        let img = uniform_image(1, 4, [0, 0, 0]);
        assert!(matches!(
            slic_segment(&img, 2, 10.0, 10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bad_superpixel_count_rejected() {
        let img = uniform_image(8, 8, [0, 0, 0]);
        assert!(matches!(
            slic_segment(&img, 1, 10.0, 10),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            slic_segment(&img, 65, 10.0, 10),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn segmentation_is_deterministic() {
        let img = two_halves(40, 30, [10, 200, 30], [240, 10, 90]);
        let a = slic_segment(&img, 12, 10.0, 10).unwrap();
        let b = slic_segment(&img, 12, 10.0, 10).unwrap();
        assert_eq!(a.labels(), b.labels());
    }
}
