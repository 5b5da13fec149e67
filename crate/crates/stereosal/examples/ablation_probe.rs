//! Scratch probe for ablation behavior (to be removed).

use stereosal::eval::{evaluate_sample, mae, DEFAULT_BETA2};
use stereosal::pipeline::{run_pipeline, PipelineConfig};
use stereosal::synth::{generate_scene, mosaic_corrupt_depth, RectRegion, SceneSpec};

fn main() -> stereosal::Result<()> {
    println!("=== criterion 6 probe: confidence gate on corrupted depth ===");
    let mut gate_wins = 0;
    let mut sum_gated = 0.0;
    let mut sum_forced = 0.0;
    for seed in 0..20u64 {
        let mut rng_shift = (seed as f64) * 0.01;
        let spec = SceneSpec {
            width: 160,
            height: 120,
            seed,
            object: RectRegion {
                center: (0.45 + rng_shift, 0.5 - rng_shift),
                size: (0.3, 0.32),
                color: [198 + (seed % 5) as u8 * 8, 40, 44],
                depth: 0.88,
            },
            ..SceneSpec::default()
        };
        rng_shift += 0.0;
        let mut sample = generate_scene(&spec);
        let gt = sample.gt.clone().unwrap();
        sample.depth = mosaic_corrupt_depth(spec.width, spec.height, seed + 1000);

        let gated_cfg = PipelineConfig::default();
        let forced_cfg = PipelineConfig {
            lambda_override: Some(1.0),
            ..PipelineConfig::default()
        };
        let gated = run_pipeline(&sample, &gated_cfg)?;
        let forced = run_pipeline(&sample, &forced_cfg)?;
        let m_gated = mae(&gated.fused.values, &gt)?;
        let m_forced = mae(&forced.fused.values, &gt)?;
        sum_gated += m_gated;
        sum_forced += m_forced;
        if m_gated <= m_forced {
            gate_wins += 1;
        }
        println!(
            "seed {seed:2}: gated {m_gated:.4} vs forced {m_forced:.4}  lambda={:.3}",
            gated.confidence.lambda_d
        );
    }
    println!(
        "gate wins {gate_wins}/20, mean gated {:.4} vs forced {:.4}",
        sum_gated / 20.0,
        sum_forced / 20.0
    );

    println!("=== criterion 7 probe: DRSS precision on distractor scenes ===");
    for (obj_size, d_center, d_depth) in [
        ((0.40, 0.44), (0.24, 0.28), 0.5),
        ((0.44, 0.48), (0.22, 0.26), 0.5),
        ((0.40, 0.44), (0.20, 0.24), 0.45),
        ((0.36, 0.40), (0.25, 0.30), 0.55),
    ] {
        let mut drss_wins = 0;
        let mut strict = 0;
        let mut sum_drss = 0.0;
        let mut sum_prelim = 0.0;
        for seed in 0..20u64 {
            let jitter = (seed % 7) as f64 * 0.01;
            let spec = SceneSpec {
                width: 160,
                height: 120,
                seed,
                object: RectRegion {
                    center: (0.56 + jitter, 0.54),
                    size: obj_size,
                    color: [200, 42, 40],
                    depth: 0.9,
                },
                distractor: Some(RectRegion {
                    center: (d_center.0, d_center.1 + jitter),
                    size: (0.2, 0.22),
                    color: [62, 188, 70],
                    depth: d_depth,
                }),
                ..SceneSpec::default()
            };
            let sample = generate_scene(&spec);
            let gt = sample.gt.clone().unwrap();

            let with_drss = PipelineConfig::default();
            let without = PipelineConfig {
                drss: false,
                ..PipelineConfig::default()
            };
            let a = run_pipeline(&sample, &with_drss)?;
            let b = run_pipeline(&sample, &without)?;
            let (row_a, _) = evaluate_sample(&a.fused, &gt, DEFAULT_BETA2)?;
            let (row_b, _) = evaluate_sample(&b.fused, &gt, DEFAULT_BETA2)?;
            sum_drss += row_a.precision;
            sum_prelim += row_b.precision;
            if row_a.precision >= row_b.precision {
                drss_wins += 1;
            }
            if row_a.precision > row_b.precision {
                strict += 1;
            }
        }
        println!(
            "obj {obj_size:?} dctr {d_center:?} depth {d_depth}: wins {drss_wins}/20 ({strict} strict), mean P {:.4} vs {:.4}",
            sum_drss / 20.0,
            sum_prelim / 20.0
        );
    }
    Ok(())
}
