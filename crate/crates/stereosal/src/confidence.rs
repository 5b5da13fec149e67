//! Global depth-map reliability from distribution statistics.
//!
//! A depth map earns high confidence when its values sit low on average,
//! disperse across the range, and spread over several depth levels. The
//! scalar gates how strongly depth influences the rest of the pipeline:
//! a near-constant or washed-out bright map scores close to zero and is
//! effectively ignored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Below this dispersion a depth map is treated as constant and gets zero
/// confidence (the coefficient of variation would blow up otherwise).
pub const SIGMA_EPSILON: f64 = 1e-6;

/// Default level thresholds: three levels split at 0.4 and 0.6.
pub const DEFAULT_LEVELS: [f64; 2] = [0.4, 0.6];

/// Reliability score of a depth map plus the statistics that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DepthConfidence {
    /// `exp((1 - mean) * cv * entropy) - 1`, zero for degenerate maps.
    pub lambda_d: f64,
    pub mean_depth: f64,
    pub std_dev: f64,
    /// Coefficient of variation, `mean / std_dev`.
    pub cv: f64,
    pub entropy: f64,
    pub level_probs: Vec<f64>,
}

impl DepthConfidence {
    /// Assemble the confidence score from precomputed statistics.
    pub fn from_stats(
        mean_depth: f64,
        std_dev: f64,
        entropy: f64,
        level_probs: Vec<f64>,
    ) -> Self {
        let (cv, lambda_d) = if std_dev < SIGMA_EPSILON {
            (0.0, 0.0)
        } else {
            let cv = mean_depth / std_dev;
            (cv, ((1.0 - mean_depth) * cv * entropy).exp() - 1.0)
        };
        Self {
            lambda_d,
            mean_depth,
            std_dev,
            cv,
            entropy,
            level_probs,
        }
    }
}

/// Depth frequency entropy over `L` levels cut by `L - 1` ascending thresholds.
///
/// A value `v` belongs to level `k` when `T_{k-1} <= v < T_k`, with `T_0 = 0`
/// and the top level closed so that `v = 1` is counted. Returns the natural-log
/// entropy `-sum p_i ln p_i` (with `0 ln 0 = 0`) and the level probabilities.
pub fn depth_entropy(depth: &ScalarField, thresholds: &[f64]) -> Result<(f64, Vec<f64>)> {
    if depth.is_empty() {
        return Err(Error::Domain("depth field is empty".into()));
    }
    validate_thresholds(thresholds)?;

    let levels = thresholds.len() + 1;
    let mut counts = vec![0usize; levels];
    for &v in depth.values() {
        let level = thresholds.iter().take_while(|&&t| v >= t).count();
        counts[level] += 1;
    }

    let n = depth.len() as f64;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let entropy = -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>();
    Ok((entropy, probs))
}

/// Compute the full confidence record for a normalized depth map.
pub fn depth_confidence(depth: &ScalarField, thresholds: &[f64]) -> Result<DepthConfidence> {
    let (entropy, level_probs) = depth_entropy(depth, thresholds)?;
    Ok(DepthConfidence::from_stats(
        depth.mean(),
        depth.std_dev(),
        entropy,
        level_probs,
    ))
}

pub fn validate_thresholds(thresholds: &[f64]) -> Result<()> {
    let ascending = thresholds.windows(2).all(|w| w[0] < w[1]);
    let in_range = thresholds.iter().all(|&t| t > 0.0 && t < 1.0);
    if !ascending || !in_range {
        return Err(Error::Config(format!(
            "level thresholds must be strictly ascending within (0,1), got {thresholds:?}"
        )));
    }
    Ok(())
}
