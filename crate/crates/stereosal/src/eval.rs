//! Saliency benchmarking: PR curves over 256 thresholds, F-measure at an
//! adaptive threshold, and MAE, per image and aggregated over a dataset.

use std::io::Write;
use std::path::Path;

use crate::dataset::SaliencyMap;
use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Weight of precision in the F-measure; the saliency-benchmark convention.
pub const DEFAULT_BETA2: f64 = 0.3;

pub const PR_THRESHOLDS: usize = 256;

/// Precision/recall at one binarization threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub precision: f64,
    pub recall: f64,
}

/// Per-image metric row.
#[derive(Debug, Clone)]
pub struct EvalRow {
    pub id: String,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub mae: f64,
}

/// Dataset-level report: per-image rows, exclusions, means, and the
/// threshold-averaged PR curve.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    /// Samples excluded for having an all-zero ground truth.
    pub excluded: Vec<String>,
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub mean_f: f64,
    pub mean_mae: f64,
    /// Exactly 256 points, one per threshold 0..=255.
    pub pr_curve: Vec<PrPoint>,
}

fn check_dims(pred: &ScalarField, gt: &ScalarField, what: &str) -> Result<()> {
    if pred.dims() != gt.dims() {
        return Err(Error::dims(format!("{what}: prediction vs gt"), pred.dims(), gt.dims()));
    }
    Ok(())
}

fn positive_count(gt: &ScalarField) -> usize {
    gt.values().iter().filter(|&&v| v > 0.5).count()
}

#[inline]
fn precision_of(tp: usize, fp: usize) -> f64 {
    if tp + fp == 0 {
        // an empty prediction mask makes no false claims
        1.0
    } else {
        tp as f64 / (tp + fp) as f64
    }
}

/// PR pairs for thresholds 0..=255 on the 8-bit quantized prediction:
/// the mask at threshold `t` is `round(pred * 255) >= t`.
pub fn pr_curve(pred: &SaliencyMap, gt: &ScalarField) -> Result<Vec<PrPoint>> {
    check_dims(&pred.values, gt, "pr_curve")?;
    let positives = positive_count(gt);
    if positives == 0 {
        return Err(Error::EmptyGroundTruth {
            id: pred.id.clone(),
        });
    }

    // Histogram by quantized level, split by gt class, then suffix-sum.
    let mut pos_at = [0usize; PR_THRESHOLDS];
    let mut neg_at = [0usize; PR_THRESHOLDS];
    for (p, g) in pred.values.values().iter().zip(gt.values()) {
        let level = (p * 255.0).round().clamp(0.0, 255.0) as usize;
        if *g > 0.5 {
            pos_at[level] += 1;
        } else {
            neg_at[level] += 1;
        }
    }

    let mut curve = Vec::with_capacity(PR_THRESHOLDS);
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut points_rev = Vec::with_capacity(PR_THRESHOLDS);
    for t in (0..PR_THRESHOLDS).rev() {
        tp += pos_at[t];
        fp += neg_at[t];
        points_rev.push(PrPoint {
            precision: precision_of(tp, fp),
            recall: tp as f64 / positives as f64,
        });
    }
    curve.extend(points_rev.into_iter().rev());
    Ok(curve)
}

/// Precision, recall, and F at the adaptive threshold
/// `t* = min(2 * mean(pred), 1)`, with `F = (1 + b) P R / (b P + R)`.
pub fn f_measure(pred: &SaliencyMap, gt: &ScalarField, beta2: f64) -> Result<EvalRow> {
    check_dims(&pred.values, gt, "f_measure")?;
    let positives = positive_count(gt);
    if positives == 0 {
        return Err(Error::EmptyGroundTruth {
            id: pred.id.clone(),
        });
    }

    let threshold = (2.0 * pred.values.mean()).min(1.0);
    let mut tp = 0usize;
    let mut fp = 0usize;
    for (p, g) in pred.values.values().iter().zip(gt.values()) {
        if *p >= threshold {
            if *g > 0.5 {
                tp += 1;
            } else {
                fp += 1;
            }
        }
    }
    let precision = precision_of(tp, fp);
    let recall = tp as f64 / positives as f64;
    let denom = beta2 * precision + recall;
    let f = if denom == 0.0 {
        0.0
    } else {
        (1.0 + beta2) * precision * recall / denom
    };
    Ok(EvalRow {
        id: pred.id.clone(),
        precision,
        recall,
        f_measure: f,
        mae: mae(&pred.values, gt)?,
    })
}

/// Mean absolute per-pixel error.
pub fn mae(pred: &ScalarField, gt: &ScalarField) -> Result<f64> {
    check_dims(pred, gt, "mae")?;
    let n = pred.len();
    if n == 0 {
        return Err(Error::Domain("cannot compute MAE of empty maps".into()));
    }
    let sum: f64 = pred
        .values()
        .iter()
        .zip(gt.values())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(sum / n as f64)
}

/// Evaluate one prediction against its mask: metric row plus PR curve.
pub fn evaluate_sample(
    pred: &SaliencyMap,
    gt: &ScalarField,
    beta2: f64,
) -> Result<(EvalRow, Vec<PrPoint>)> {
    Ok((f_measure(pred, gt, beta2)?, pr_curve(pred, gt)?))
}

/// Aggregate per-image results: unweighted means, pointwise-averaged curve.
pub fn aggregate(
    results: Vec<(EvalRow, Vec<PrPoint>)>,
    excluded: Vec<String>,
) -> Result<EvalReport> {
    if results.is_empty() {
        return Err(Error::Domain(
            "no valid samples to aggregate (all excluded or none evaluated)".into(),
        ));
    }
    let n = results.len() as f64;
    let mut pr_curve = vec![
        PrPoint {
            precision: 0.0,
            recall: 0.0,
        };
        PR_THRESHOLDS
    ];
    let mut rows = Vec::with_capacity(results.len());
    let (mut sp, mut sr, mut sf, mut sm) = (0.0, 0.0, 0.0, 0.0);
    for (row, curve) in results {
        sp += row.precision;
        sr += row.recall;
        sf += row.f_measure;
        sm += row.mae;
        for (acc, p) in pr_curve.iter_mut().zip(curve) {
            acc.precision += p.precision;
            acc.recall += p.recall;
        }
        rows.push(row);
    }
    for p in &mut pr_curve {
        p.precision /= n;
        p.recall /= n;
    }
    Ok(EvalReport {
        rows,
        excluded,
        mean_precision: sp / n,
        mean_recall: sr / n,
        mean_f: sf / n,
        mean_mae: sm / n,
        pr_curve,
    })
}

/// Write the per-image rows plus a final `mean` row as CSV.
pub fn write_report_csv(report: &EvalReport, path: &Path) -> Result<()> {
    let mut out = String::from("id,precision,recall,f_measure,mae\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.id, row.precision, row.recall, row.f_measure, row.mae
        ));
    }
    out.push_str(&format!(
        "mean,{},{},{},{}\n",
        report.mean_precision, report.mean_recall, report.mean_f, report.mean_mae
    ));
    write_text(path, &out)
}

/// Write the 256-row threshold-averaged PR curve as CSV.
pub fn write_pr_csv(report: &EvalReport, path: &Path) -> Result<()> {
    let mut out = String::from("threshold,precision,recall\n");
    for (t, p) in report.pr_curve.iter().enumerate() {
        out.push_str(&format!("{t},{},{}\n", p.precision, p.recall));
    }
    write_text(path, &out)
}

fn write_text(path: &Path, contents: &str) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(contents.as_bytes()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
