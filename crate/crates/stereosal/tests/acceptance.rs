//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its measured numbers (visible with `--nocapture`).
//!
//!     cargo test --test acceptance -- --nocapture

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stereosal::color::Lab;
use stereosal::compactness::{
    color_compactness, depth_compactness, spatial_mean, DepthDamping,
};
use stereosal::confidence::{depth_confidence, DepthConfidence, DEFAULT_LEVELS};
use stereosal::dataset::SaliencyMap;
use stereosal::diffusion::DiffusionOperator;
use stereosal::eval::{f_measure, mae, pr_curve, DEFAULT_BETA2};
use stereosal::features::{SuperpixelFeatures, SuperpixelSet};
use stereosal::field::ScalarField;
use stereosal::foreground::{foreground_contrast, SeedSet};
use stereosal::graph::similarity;
use stereosal::pipeline::{run_pipeline, PipelineConfig};
use stereosal::synth::{generate_scene, mosaic_corrupt_depth, RectRegion, SceneSpec};

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn toy_features(
    centroids: Vec<[f64; 2]>,
    counts: Vec<usize>,
    depths: Vec<f64>,
    hists: Vec<Vec<f64>>,
    dims: (usize, usize),
) -> SuperpixelSet {
    let superpixels = centroids
        .into_iter()
        .zip(counts)
        .zip(depths)
        .zip(hists)
        .map(|(((centroid, pixel_count), mean_depth), lbp_hist)| SuperpixelFeatures {
            mean_lab: Lab::default(),
            mean_depth,
            centroid,
            pixel_count,
            lbp_hist,
        })
        .collect();
    SuperpixelSet {
        superpixels,
        image_width: dims.0,
        image_height: dims.1,
    }
}

fn random_instance(rng: &mut ChaCha8Rng) -> (SuperpixelSet, DMatrix<f64>, SeedSet, f64) {
    let n = rng.random_range(2..=10);
    let dims = (rng.random_range(20..200), rng.random_range(20..200));
    let centroids: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            [
                rng.random_range(0.0..dims.0 as f64),
                rng.random_range(0.0..dims.1 as f64),
            ]
        })
        .collect();
    let counts: Vec<usize> = (0..n).map(|_| rng.random_range(1..60)).collect();
    let depths: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
    let hists: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..8).map(|_| rng.random_range(0.0..30.0)).collect())
        .collect();

    let mut affinity = DMatrix::zeros(n, n);
    for i in 0..n {
        affinity[(i, i)] = 1.0;
        for j in (i + 1)..n {
            let a = rng.random_range(1e-6..=1.0);
            affinity[(i, j)] = a;
            affinity[(j, i)] = a;
        }
    }

    let n_seeds = rng.random_range(1..=n);
    let mut indices: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        indices.swap(i, j);
    }
    let mut refined: Vec<usize> = indices[..n_seeds].to_vec();
    refined.sort_unstable();
    let mean_seed_depth =
        refined.iter().map(|&i| depths[i]).sum::<f64>() / refined.len() as f64;
    let seeds = SeedSet {
        preliminary: refined.clone(),
        refined,
        mean_seed_depth,
    };
    let lambda = rng.random_range(0.0..2.0);
    (toy_features(centroids, counts, depths, hists, dims), affinity, seeds, lambda)
}

fn euclid(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

// Independent naive evaluations of the weighted-sum definitions.

fn naive_spatial_mean(a: &DMatrix<f64>, f: &SuperpixelSet) -> Vec<[f64; 2]> {
    let n = f.len();
    (0..n)
        .map(|i| {
            let mut num = [0.0f64; 2];
            let mut den = 0.0f64;
            for j in 0..n {
                let w = a[(i, j)] * f.superpixels[j].pixel_count as f64;
                num[0] += w * f.superpixels[j].centroid[0];
                num[1] += w * f.superpixels[j].centroid[1];
                den += w;
            }
            [num[0] / den, num[1] / den]
        })
        .collect()
}

fn naive_color_compactness(
    a: &DMatrix<f64>,
    f: &SuperpixelSet,
    mu: &[[f64; 2]],
) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            let mut num = 0.0f64;
            let mut den = 0.0f64;
            for j in 0..n {
                let w = a[(i, j)] * f.superpixels[j].pixel_count as f64;
                num += w * euclid(f.superpixels[j].centroid, mu[i]);
                den += w;
            }
            num / den
        })
        .collect()
}

fn naive_depth_compactness(
    a: &DMatrix<f64>,
    f: &SuperpixelSet,
    lambda: f64,
    sigma2: f64,
) -> Vec<f64> {
    let n = f.len();
    let center = f.image_center();
    (0..n)
        .map(|i| {
            let mut num = 0.0f64;
            let mut den = 0.0f64;
            for j in 0..n {
                let w = a[(i, j)] * f.superpixels[j].pixel_count as f64;
                num += w
                    * euclid(f.superpixels[j].centroid, center)
                    * (-lambda * f.superpixels[i].mean_depth / sigma2).exp();
                den += w;
            }
            num / den
        })
        .collect()
}

fn naive_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot.abs() / (na * nb)
    }
}

fn naive_foreground_contrast(
    a: &DMatrix<f64>,
    f: &SuperpixelSet,
    seeds: &SeedSet,
    sigma2: f64,
) -> Vec<f64> {
    let n = f.len();
    let diag = f.image_diagonal();
    (0..n)
        .map(|i| {
            let mut sum = 0.0f64;
            for &j in &seeds.refined {
                sum += a[(i, j)]
                    * naive_cosine(&f.superpixels[i].lbp_hist, &f.superpixels[j].lbp_hist)
                    * (-euclid(f.superpixels[i].centroid, f.superpixels[j].centroid)
                        / diag
                        / sigma2)
                        .exp()
                    * f.superpixels[j].pixel_count as f64;
            }
            sum
        })
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_brute_force_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let sigma2 = 0.1;
    let mut worst = 0.0f64;

    for _ in 0..200 {
        let (features, affinity, seeds, lambda) = random_instance(&mut rng);

        let mu = spatial_mean(&affinity, &features);
        let mu_ref = naive_spatial_mean(&affinity, &features);
        let mu_flat: Vec<f64> = mu.iter().flatten().copied().collect();
        let mu_ref_flat: Vec<f64> = mu_ref.iter().flatten().copied().collect();
        worst = worst.max(max_abs_diff(&mu_flat, &mu_ref_flat));

        let cc = color_compactness(&affinity, &features, &mu);
        worst = worst.max(max_abs_diff(
            &cc,
            &naive_color_compactness(&affinity, &features, &mu_ref),
        ));

        let dc = depth_compactness(&affinity, &features, lambda, sigma2, DepthDamping::Target);
        worst = worst.max(max_abs_diff(
            &dc,
            &naive_depth_compactness(&affinity, &features, lambda, sigma2),
        ));

        let fg = foreground_contrast(&affinity, &features, &seeds, sigma2).unwrap();
        worst = worst.max(max_abs_diff(
            &fg,
            &naive_foreground_contrast(&affinity, &features, &seeds, sigma2),
        ));
    }

    let elapsed = start.elapsed();
    assert!(worst < 1e-12, "max abs error {worst:e} >= 1e-12");
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "criterion 1 PASS: 200 random instances, max abs error {worst:.2e} (< 1e-12) in {:.2?}",
        elapsed
    );
}

#[test]
fn criterion_2_depth_confidence_suite() {
    let start = Instant::now();

    // constant map: dispersion below epsilon forces zero
    let constant = ScalarField::from_vec(40, 30, vec![0.37; 1200]).unwrap();
    let c = depth_confidence(&constant, &DEFAULT_LEVELS).unwrap();
    assert_eq!(c.lambda_d, 0.0);

    // all-nearest mean: the (1 - mean) factor kills the exponent
    let c = DepthConfidence::from_stats(1.0, 0.25, 1.3, vec![0.4, 0.3, 0.3]);
    assert_eq!(c.lambda_d, 0.0);

    // permutation invariance over 50 shuffles
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut values: Vec<f64> = (0..600).map(|_| rng.random_range(0.0..=1.0)).collect();
    let reference = depth_confidence(
        &ScalarField::from_vec(30, 20, values.clone()).unwrap(),
        &DEFAULT_LEVELS,
    )
    .unwrap()
    .lambda_d;
    for _ in 0..50 {
        for i in (1..values.len()).rev() {
            let j = rng.random_range(0..=i);
            values.swap(i, j);
        }
        let shuffled = depth_confidence(
            &ScalarField::from_vec(30, 20, values.clone()).unwrap(),
            &DEFAULT_LEVELS,
        )
        .unwrap()
        .lambda_d;
        assert!(
            (shuffled - reference).abs() < 1e-9,
            "permutation changed lambda: {reference} vs {shuffled}"
        );
    }

    // hand-computed case
    let hand = DepthConfidence::from_stats(0.3, 0.2, 1.0, vec![]);
    let expected = 1.05f64.exp() - 1.0;
    assert!(
        (hand.lambda_d - expected).abs() < 1e-9,
        "hand case: {} vs {expected}",
        hand.lambda_d
    );

    // ordering: three well-separated bands with low mean beat a
    // near-constant bright map
    let mut banded = ScalarField::new(60, 30);
    for y in 0..30 {
        for x in 0..60 {
            let v = match x / 20 {
                0 => 0.1,
                1 => 0.5,
                _ => 0.9,
            };
            banded.set(x, y, v + 0.01 * ((x + y) % 3) as f64);
        }
    }
    let mut bright = ScalarField::new(60, 30);
    for y in 0..30 {
        for x in 0..60 {
            bright.set(x, y, 0.93 + 0.002 * ((x * 7 + y) % 5) as f64);
        }
    }
    let good = depth_confidence(&banded, &DEFAULT_LEVELS).unwrap().lambda_d;
    let poor = depth_confidence(&bright, &DEFAULT_LEVELS).unwrap().lambda_d;
    assert!(
        good > poor,
        "banded map should outrank bright map: {good} vs {poor}"
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
    println!(
        "criterion 2 PASS: degenerate rules, 50-shuffle invariance, hand case {:.6}, ordering {good:.4} > {poor:.4} in {elapsed:.2?}",
        hand.lambda_d
    );
}

#[test]
fn criterion_3_diffusion_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1FF);
    let mut worst_residual = 0.0f64;
    let mut worst_linearity = 0.0f64;

    for case in 0..100 {
        let n = rng.random_range(2..=200);
        let alpha = if case % 3 == 0 {
            0.99
        } else {
            rng.random_range(0.0..0.999)
        };
        let mut weights = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_range(0.0..1.0) < (2.0 / n as f64).max(0.05) {
                    let w = rng.random_range(0.01..=1.0);
                    weights[(i, j)] = w;
                    weights[(j, i)] = w;
                }
            }
        }
        let op = DiffusionOperator::new(&weights, alpha).unwrap();

        // independent S for the residual check
        let deg: Vec<f64> = (0..n).map(|i| weights.row(i).sum()).collect();
        let mut s = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if deg[i] > 0.0 && deg[j] > 0.0 {
                    s[(i, j)] = weights[(i, j)] / (deg[i] * deg[j]).sqrt();
                }
            }
        }

        let y: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
        let f = op.manifold_rank(&y).unwrap();
        let fv = nalgebra::DVector::from_column_slice(&f);
        let residual = &fv - &s * &fv * alpha;
        for i in 0..n {
            worst_residual = worst_residual.max((residual[i] - y[i]).abs());
        }

        // nonnegativity: Neumann series of a nonnegative operator
        assert!(
            f.iter().all(|&v| v >= -1e-10),
            "nonnegative seeds produced negative score"
        );

        // linearity
        let y2: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let combined: Vec<f64> = y.iter().zip(&y2).map(|(u, v)| a * u + b * v).collect();
        let f2 = op.manifold_rank(&y2).unwrap();
        let fc = op.manifold_rank(&combined).unwrap();
        for i in 0..n {
            worst_linearity = worst_linearity.max((fc[i] - (a * f[i] + b * f2[i])).abs());
        }
    }

    assert!(
        worst_residual < 1e-8,
        "residual {worst_residual:e} >= 1e-8"
    );
    assert!(
        worst_linearity < 1e-8,
        "linearity defect {worst_linearity:e} >= 1e-8"
    );

    // alpha = 0 is the identity
    let mut w = DMatrix::zeros(4, 4);
    for i in 0..3 {
        w[(i, i + 1)] = 0.5;
        w[(i + 1, i)] = 0.5;
    }
    let op = DiffusionOperator::new(&w, 0.0).unwrap();
    let y = [0.9, -0.3, 0.0, 2.5];
    let f = op.manifold_rank(&y).unwrap();
    for i in 0..4 {
        assert!((f[i] - y[i]).abs() < 1e-12);
    }

    println!(
        "criterion 3 PASS: 100 random graphs, residual {worst_residual:.2e} (< 1e-8), linearity {worst_linearity:.2e}, identity at alpha=0, nonnegativity"
    );
}

#[test]
fn criterion_4_affinity_properties() {
    // symmetry + unit diagonal on a real scene graph
    let sample = generate_scene(&SceneSpec {
        width: 120,
        height: 90,
        ..Default::default()
    });
    let seg = stereosal::slic::slic_segment(&sample.rgb, 60, 10.0, 10).unwrap();
    let features = stereosal::features::extract_features(&sample, &seg).unwrap();
    let graph = stereosal::graph::build_affinity(&features, &seg, 0.7, 0.1, 1).unwrap();
    let n = graph.len();
    for i in 0..n {
        assert_eq!(graph.affinity[(i, i)], 1.0);
        for j in 0..n {
            assert_eq!(graph.affinity[(i, j)], graph.affinity[(j, i)]);
            assert_eq!(graph.weights[(i, j)], graph.weights[(j, i)]);
            assert!(graph.affinity[(i, j)] > 0.0 && graph.affinity[(i, j)] <= 1.0);
        }
    }

    // zero confidence: perturbing every depth leaves A bitwise identical
    let mut perturbed = features.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in &mut perturbed.superpixels {
        s.mean_depth = rng.random_range(0.0..=1.0);
    }
    let g0 = stereosal::graph::build_affinity(&features, &seg, 0.0, 0.1, 1).unwrap();
    let g1 = stereosal::graph::build_affinity(&perturbed, &seg, 0.0, 0.1, 1).unwrap();
    assert_eq!(g0.affinity, g1.affinity);

    // strict monotone decrease in both distances
    let mut prev = f64::INFINITY;
    for step in 0..60 {
        let l = step as f64 * 0.02;
        let a = similarity(l, 0.3, 0.8, 0.1);
        assert!(a < prev);
        prev = a;
    }
    prev = f64::INFINITY;
    for step in 0..60 {
        let d = step as f64 * 0.02;
        let a = similarity(0.3, d, 0.8, 0.1);
        assert!(a < prev);
        prev = a;
    }

    println!(
        "criterion 4 PASS: symmetry, unit diagonal, exact depth invariance at lambda=0, strict monotonicity ({n} regions)"
    );
}

#[test]
fn criterion_5_end_to_end_fixture() {
    let spec = SceneSpec::default();
    assert_eq!((spec.width, spec.height), (320, 240));
    let sample = generate_scene(&spec);
    let gt = sample.gt.clone().unwrap();

    let start = Instant::now();
    let output = run_pipeline(&sample, &PipelineConfig::default()).unwrap();
    let elapsed = start.elapsed();

    let (mut inside, mut outside) = (0.0f64, 0.0f64);
    let (mut n_in, mut n_out) = (0usize, 0usize);
    for (v, g) in output.fused.values.values().iter().zip(gt.values()) {
        if *g > 0.5 {
            inside += v;
            n_in += 1;
        } else {
            outside += v;
            n_out += 1;
        }
    }
    let mean_in = inside / n_in as f64;
    let mean_out = outside / n_out as f64;
    assert!(
        mean_in >= 3.0 * mean_out,
        "contrast too weak: inside {mean_in:.4} vs outside {mean_out:.4}"
    );

    let row = f_measure(&output.fused, &gt, DEFAULT_BETA2).unwrap();
    assert!(row.f_measure >= 0.85, "F {:.4} < 0.85", row.f_measure);
    assert!(elapsed < Duration::from_secs(2), "pipeline took {elapsed:?}");

    println!(
        "criterion 5 PASS: inside/outside {:.1}x (>= 3x), F {:.4} (>= 0.85), {:.0} ms (< 2 s)",
        mean_in / mean_out,
        row.f_measure,
        elapsed.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_6_confidence_gate() {
    let mut sum_gated = 0.0;
    let mut sum_forced = 0.0;
    let gated_cfg = PipelineConfig::default();
    let forced_cfg = PipelineConfig {
        lambda_override: Some(1.0),
        ..Default::default()
    };

    for seed in 0..20u64 {
        let shift = (seed % 9) as f64 * 0.01;
        let spec = SceneSpec {
            width: 160,
            height: 120,
            seed,
            object: RectRegion {
                center: (0.45 + shift, 0.5 - shift),
                size: (0.3, 0.32),
                color: [198 + (seed % 5) as u8 * 8, 40, 44],
                depth: 0.88,
            },
            ..Default::default()
        };
        let mut sample = generate_scene(&spec);
        let gt = sample.gt.clone().unwrap();
        sample.depth = mosaic_corrupt_depth(spec.width, spec.height, seed + 1000);

        let gated = run_pipeline(&sample, &gated_cfg).unwrap();
        assert_eq!(
            gated.confidence.lambda_d, 0.0,
            "washed-out mosaic should carry zero confidence"
        );
        let forced = run_pipeline(&sample, &forced_cfg).unwrap();
        sum_gated += mae(&gated.fused.values, &gt).unwrap();
        sum_forced += mae(&forced.fused.values, &gt).unwrap();
    }

    let mean_gated = sum_gated / 20.0;
    let mean_forced = sum_forced / 20.0;
    assert!(
        mean_gated <= mean_forced,
        "gate failed: MAE {mean_gated:.4} with gate vs {mean_forced:.4} forced"
    );
    println!(
        "criterion 6 PASS: mean MAE {mean_gated:.4} gated <= {mean_forced:.4} with lambda forced to 1.0 (20 fixtures)"
    );
}

#[test]
fn criterion_7_drss_effect() {
    let with_drss = PipelineConfig::default();
    let without = PipelineConfig {
        drss: false,
        ..Default::default()
    };
    let mut sum_drss = 0.0;
    let mut sum_prelim = 0.0;
    let mut strict_wins = 0;

    for seed in 0..20u64 {
        let jitter = (seed % 7) as f64 * 0.01;
        let spec = SceneSpec {
            width: 160,
            height: 120,
            seed,
            object: RectRegion {
                center: (0.56 + jitter, 0.54),
                size: (0.36, 0.40),
                color: [200, 42, 40],
                depth: 0.9,
            },
            distractor: Some(RectRegion {
                center: (0.25, 0.30 + jitter),
                size: (0.2, 0.22),
                color: [62, 188, 70],
                depth: 0.55,
            }),
            ..Default::default()
        };
        let sample = generate_scene(&spec);
        let gt = sample.gt.clone().unwrap();

        let a = run_pipeline(&sample, &with_drss).unwrap();
        let b = run_pipeline(&sample, &without).unwrap();
        assert!(
            a.seeds.refined.len() <= a.seeds.preliminary.len(),
            "refinement must not grow the seed set"
        );
        let pa = f_measure(&a.fused, &gt, DEFAULT_BETA2).unwrap().precision;
        let pb = f_measure(&b.fused, &gt, DEFAULT_BETA2).unwrap().precision;
        sum_drss += pa;
        sum_prelim += pb;
        if pa > pb {
            strict_wins += 1;
        }
    }

    let mean_drss = sum_drss / 20.0;
    let mean_prelim = sum_prelim / 20.0;
    assert!(
        mean_drss >= mean_prelim,
        "DRSS hurt precision: {mean_drss:.4} vs {mean_prelim:.4}"
    );
    println!(
        "criterion 7 PASS: mean precision {mean_drss:.4} with DRSS >= {mean_prelim:.4} preliminary-only ({strict_wins}/20 strictly better)"
    );
}

#[test]
fn criterion_8_metrics_suite() {
    // hand-computed confusion counts on the 4-pixel toy
    let pred = SaliencyMap::new(
        "toy",
        ScalarField::from_vec(4, 1, vec![1.0, 0.6, 0.4, 0.0]).unwrap(),
    )
    .unwrap();
    let gt = ScalarField::from_vec(4, 1, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
    let curve = pr_curve(&pred, &gt).unwrap();
    assert_eq!(curve.len(), 256);
    assert_eq!(curve[128].precision, 1.0);
    assert_eq!(curve[128].recall, 1.0);
    assert!((curve[102].precision - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(curve[102].recall, 1.0);

    // perfect binary prediction
    let perfect = SaliencyMap::new(
        "p",
        ScalarField::from_vec(4, 1, vec![1.0, 1.0, 0.0, 0.0]).unwrap(),
    )
    .unwrap();
    let perfect_gt = ScalarField::from_vec(4, 1, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
    for point in &pr_curve(&perfect, &perfect_gt).unwrap()[1..] {
        assert_eq!((point.precision, point.recall), (1.0, 1.0));
    }
    let row = f_measure(&perfect, &perfect_gt, DEFAULT_BETA2).unwrap();
    assert!((row.f_measure - 1.0).abs() < 1e-12);

    // uniform 0.5 prediction saturates the adaptive threshold
    let uniform = SaliencyMap::new(
        "u",
        ScalarField::from_vec(4, 1, vec![0.5; 4]).unwrap(),
    )
    .unwrap();
    let row = f_measure(&uniform, &perfect_gt, DEFAULT_BETA2).unwrap();
    assert_eq!((row.precision, row.recall, row.f_measure), (1.0, 0.0, 0.0));

    // F formula arithmetic
    let f: f64 = (1.0 + 0.3) * 0.6 * 0.5 / (0.3 * 0.6 + 0.5);
    assert!((f - 0.573529411764706).abs() < 1e-12);

    // MAE identities
    let quarter = ScalarField::from_vec(4, 1, vec![0.25; 4]).unwrap();
    let half_gt = ScalarField::from_vec(4, 1, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
    assert!((mae(&quarter, &half_gt).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(mae(&half_gt, &half_gt).unwrap(), 0.0);
    let inverted = ScalarField::from_vec(4, 1, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
    assert_eq!(mae(&inverted, &half_gt).unwrap(), 1.0);

    // recall monotonicity over 100 random map/mask pairs
    let mut rng = ChaCha8Rng::seed_from_u64(0xE7A1);
    for _ in 0..100 {
        let w = rng.random_range(4..40);
        let h = rng.random_range(4..40);
        let values: Vec<f64> = (0..w * h).map(|_| rng.random_range(0.0..=1.0)).collect();
        let mut mask: Vec<f64> = (0..w * h)
            .map(|_| f64::from(rng.random_range(0.0..1.0) < 0.3))
            .collect();
        if mask.iter().all(|&v| v == 0.0) {
            mask[0] = 1.0;
        }
        let pred = SaliencyMap::new(
            "r",
            ScalarField::from_vec(w, h, values).unwrap(),
        )
        .unwrap();
        let gt = ScalarField::from_vec(w, h, mask).unwrap();
        let curve = pr_curve(&pred, &gt).unwrap();
        assert_eq!(curve[0].recall, 1.0);
        for pair in curve.windows(2) {
            assert!(pair[1].recall <= pair[0].recall + 1e-15);
        }
    }

    println!(
        "criterion 8 PASS: hand-computed PR/F/MAE values exact, recall monotone on 100 random pairs"
    );
}

/// Optional dataset run: set STEREOSAL_NJU1985 to a directory in the
/// rgb/ + depth/ + gt/ layout to exercise it. Deviations from the reference
/// aggregate F are reported, not failed.
#[test]
fn criterion_9_optional_dataset_run() {
    let Some(root) = std::env::var_os("STEREOSAL_NJU1985") else {
        println!("criterion 9 SKIP: STEREOSAL_NJU1985 not set, dataset not supplied");
        return;
    };
    let root = std::path::PathBuf::from(root);
    let out = tempfile::tempdir().unwrap();
    let report_path = out.path().join("report.csv");

    let batch = stereosal::batch::run_batch(
        &root,
        out.path(),
        &PipelineConfig::default(),
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        false,
    )
    .unwrap();
    assert!(batch.succeeded > 0, "no samples processed");

    let report = stereosal::batch::evaluate_directories(
        out.path(),
        &root.join("gt"),
        &report_path,
        DEFAULT_BETA2,
    )
    .unwrap();

    const REFERENCE_F: f64 = 0.6055;
    let delta = (report.mean_f - REFERENCE_F).abs();
    if delta <= 0.08 {
        println!(
            "criterion 9 PASS: aggregate F {:.4} within 0.08 of reference {REFERENCE_F}",
            report.mean_f
        );
    } else {
        println!(
            "criterion 9 NOTE: aggregate F {:.4} deviates {delta:.4} from reference {REFERENCE_F} (reported, not failing; objectness prior and operating point differ)",
            report.mean_f
        );
    }
}
