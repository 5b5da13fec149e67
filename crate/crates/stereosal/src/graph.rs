//! Superpixel affinity graph: dense pairwise similarity plus sparse
//! adjacency-restricted weights.
//!
//! Similarity combines the Lab color distance with a confidence-weighted
//! depth distance in one exponential kernel. Lab channels are rescaled to
//! [0,1] before the distance so the color and depth terms share one scale
//! and a single bandwidth works for both.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::features::SuperpixelSet;
use crate::slic::SegmentationMap;

/// Pairwise similarity kernel: `exp(-(l + lambda_d * d) / sigma2)`.
///
/// `l` is the normalized-Lab color distance, `d` the absolute mean-depth
/// difference. Monotonically decreasing in both.
#[inline]
pub fn similarity(color_dist: f64, depth_dist: f64, lambda_d: f64, sigma2: f64) -> f64 {
    (-(color_dist + lambda_d * depth_dist) / sigma2).exp()
}

/// Dense affinity `A`, adjacency-restricted weights `W`, and neighbor sets.
#[derive(Debug, Clone)]
pub struct AffinityGraph {
    /// Symmetric, unit diagonal, entries in (0,1].
    pub affinity: DMatrix<f64>,
    /// `w_ij = a_ij` for adjacent pairs, 0 elsewhere; zero diagonal.
    pub weights: DMatrix<f64>,
    /// Sorted neighbor lists; symmetric.
    pub neighbors: Vec<Vec<usize>>,
    /// Depth confidence the graph was built with.
    pub lambda_d: f64,
}

impl AffinityGraph {
    pub fn len(&self) -> usize {
        self.affinity.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.affinity.is_empty()
    }
}

/// Regions sharing at least one pixel edge. `ring = 1` is direct adjacency;
/// `ring = 2` additionally links neighbors of neighbors.
pub fn adjacency(seg: &SegmentationMap, ring: u32) -> Result<Vec<Vec<usize>>> {
    if ring == 0 {
        return Err(Error::Config("ring must be >= 1".into()));
    }
    let n = seg.len();
    let mut adj = vec![vec![false; n]; n];
    let (w, h) = (seg.width(), seg.height());
    for y in 0..h {
        for x in 0..w {
            let a = seg.label(x, y) as usize;
            if x + 1 < w {
                let b = seg.label(x + 1, y) as usize;
                if a != b {
                    adj[a][b] = true;
                    adj[b][a] = true;
                }
            }
            if y + 1 < h {
                let b = seg.label(x, y + 1) as usize;
                if a != b {
                    adj[a][b] = true;
                    adj[b][a] = true;
                }
            }
        }
    }

    for _ in 1..ring {
        let prev = adj.clone();
        for i in 0..n {
            for j in 0..n {
                if prev[i][j] {
                    for k in 0..n {
                        if prev[j][k] && k != i {
                            adj[i][k] = true;
                            adj[k][i] = true;
                        }
                    }
                }
            }
        }
    }

    Ok(adj
        .into_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter_map(|(j, &is_adj)| is_adj.then_some(j))
                .collect()
        })
        .collect())
}

/// Build the affinity graph from superpixel features.
///
/// With `lambda_d = 0` the graph is exactly independent of the depth channel,
/// which is how an unreliable depth map drops out of the pipeline.
pub fn build_affinity(
    features: &SuperpixelSet,
    seg: &SegmentationMap,
    lambda_d: f64,
    sigma2: f64,
    ring: u32,
) -> Result<AffinityGraph> {
    if sigma2 <= 0.0 {
        return Err(Error::Config(format!(
            "sigma2 must be positive, got {sigma2}"
        )));
    }
    let n = features.len();
    if n != seg.len() {
        return Err(Error::Domain(format!(
            "feature count {n} does not match segmentation regions {}",
            seg.len()
        )));
    }

    let lab_norm: Vec<[f64; 3]> = features
        .superpixels
        .iter()
        .map(|s| s.mean_lab.normalized())
        .collect();
    let depths = features.mean_depths();

    let mut affinity = DMatrix::zeros(n, n);
    for i in 0..n {
        affinity[(i, i)] = 1.0;
        for j in (i + 1)..n {
            let dc = color_distance(&lab_norm[i], &lab_norm[j]);
            let dd = (depths[i] - depths[j]).abs();
            let a = similarity(dc, dd, lambda_d, sigma2);
            affinity[(i, j)] = a;
            affinity[(j, i)] = a;
        }
    }

    let neighbors = adjacency(seg, ring)?;
    let mut weights = DMatrix::zeros(n, n);
    for (i, nbrs) in neighbors.iter().enumerate() {
        for &j in nbrs {
            weights[(i, j)] = affinity[(i, j)];
        }
    }

    Ok(AffinityGraph {
        affinity,
        weights,
        neighbors,
        lambda_d,
    })
}

#[inline]
fn color_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d0 = a[0] - b[0];
    let d1 = a[1] - b[1];
    let d2 = a[2] - b[2];
    (d0 * d0 + d1 * d1 + d2 * d2).sqrt()
}
