//! Nuisance ablation for identity discrimination. Run with
//! `cargo test -p chtm-core --test probe_identity -- --ignored --nocapture`.

use chtm_core::eval::{
    chtm_features, dtm_features, identity_presets, nearest_centroid, separability, ClassLabel,
    Identity, LabeledSample, Threat,
};
use chtm_core::kinematics::GaitConfig;
use chtm_core::pipeline::{simulate_products, PipelineConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Clone, Copy)]
struct Nuisance {
    phase: bool,
    freq: bool,
    range: bool,
    heading: bool,
}

fn build_samples(
    nuisance: Nuisance,
    per_class: usize,
    seed: u64,
    threats: &[Threat],
) -> (Vec<LabeledSample>, Vec<LabeledSample>) {
    let cfg = PipelineConfig::default();
    let presets = identity_presets(&GaitConfig::default());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dtm_samples = Vec::new();
    let mut chtm_samples = Vec::new();
    for identity in Identity::ALL {
        for &threat in threats {
            for _ in 0..per_class {
                let mut gait = presets[identity.index()].clone();
                gait.pattern = threat.pattern();
                if nuisance.freq {
                    gait.gait_frequency *= rng.gen_range(0.9..1.1);
                }
                let r0 = if nuisance.range {
                    rng.gen_range(1.0f64..5.0)
                } else {
                    4.0
                };
                let jitter = if nuisance.heading {
                    rng.gen_range(-10f64.to_radians()..10f64.to_radians())
                } else {
                    0.0
                };
                // All samples walk away from the radar: every start range in
                // [1, 5] keeps the target in the scene without crossing the
                // array.
                gait.walk_heading = 0.0 + jitter;
                let _ = PI;
                let t0 = if nuisance.phase {
                    rng.gen_range(0.0..1.0 / gait.gait_frequency)
                } else {
                    0.0
                };
                gait.initial_position = [
                    r0 - gait.torso_speed * gait.walk_heading.cos() * t0,
                    -gait.torso_speed * gait.walk_heading.sin() * t0,
                    0.0,
                ];
                let products = simulate_products(&gait, t0, &cfg, None).unwrap();
                let label = ClassLabel { identity, threat };
                dtm_samples.push(LabeledSample {
                    label,
                    features: dtm_features(&products.dtm),
                    source_id: String::new(),
                });
                chtm_samples.push(LabeledSample {
                    label,
                    features: chtm_features(&products.chtm_micro),
                    source_id: String::new(),
                });
            }
        }
    }
    (dtm_samples, chtm_samples)
}

fn eval_accuracy(samples: &[LabeledSample]) -> f64 {
    use chtm_core::eval::stratified_split;
    let labels: Vec<ClassLabel> = samples.iter().map(|s| s.label).collect();
    let mut acc = 0.0;
    for r in 0..5u64 {
        let (tr, te) = stratified_split(&labels, 0.75, 99 + r);
        let train: Vec<_> = tr.iter().map(|&i| samples[i].clone()).collect();
        let test: Vec<_> = te.iter().map(|&i| samples[i].clone()).collect();
        acc += nearest_centroid(&train, &test).unwrap().overall_accuracy / 5.0;
    }
    acc
}

#[test]
#[ignore]
fn probe_identity_nuisances() {
    let combos = [
        ("none", Nuisance { phase: false, freq: false, range: false, heading: false }),
        ("phase", Nuisance { phase: true, freq: false, range: false, heading: false }),
        ("phase+freq", Nuisance { phase: true, freq: true, range: false, heading: false }),
        ("phase+range", Nuisance { phase: true, freq: false, range: true, heading: false }),
        ("all", Nuisance { phase: true, freq: true, range: true, heading: true }),
    ];
    for (name, n) in combos {
        // 4-class identity problem, unarmed only.
        let (dtm_s, chtm_s) = build_samples(n, 12, 7, &[Threat::Unarmed]);
        let id_dtm = eval_accuracy(&dtm_s);
        let id_chtm = eval_accuracy(&chtm_s);
        let sep_d = separability(&dtm_s).unwrap();
        let sep_c = separability(&chtm_s).unwrap();
        println!(
            "{name:12} identity4: DTM {id_dtm:.3} ChTM {id_chtm:.3} | sep DTM {:.3}/{:.3} ChTM {:.3}/{:.3}",
            sep_d.d_inter, sep_d.d_intra, sep_c.d_inter, sep_c.d_intra
        );
    }
    // Threat-only (2-class), full nuisance, both threats, preset P1 only
    // would be 2-class; use all identities with threat labels collapsed by
    // relabeling identity to P1.
    let (mut dtm_s, mut chtm_s) = build_samples(
        Nuisance { phase: true, freq: true, range: true, heading: true },
        6,
        11,
        &Threat::ALL,
    );
    for s in dtm_s.iter_mut().chain(chtm_s.iter_mut()) {
        s.label = ClassLabel {
            identity: Identity::P1,
            threat: s.label.threat,
        };
    }
    println!(
        "threat2 (all nuisances): DTM {:.3} ChTM {:.3}",
        eval_accuracy(&dtm_s),
        eval_accuracy(&chtm_s)
    );
}
