//! Envelope/normalization calibration grid. Run with
//! `cargo test -p chtm-core --test probe_grid -- --ignored --nocapture`.

use chtm_core::chtm::{build_chtm, Region};
use chtm_core::dsp::DopplerTimeMap;
use chtm_core::envelope::{
    adaptive_thresholds, fill_and_smooth, gaussian_smooth, scan_envelopes, SmoothingConfig,
};
use chtm_core::eval::{generate_specs, Threat};
use chtm_core::kinematics::{expected_peak_doppler, GaitConfig};
use chtm_core::pipeline::{radar_center, simulate_with_cube, PipelineConfig};
use nalgebra::Vector3;

#[derive(Clone, Copy, PartialEq)]
enum Norm {
    Max,
    Energy,
}

#[derive(Clone, Copy, PartialEq)]
enum SliceSource {
    Raw,
    Smoothed,
}

fn normalized(dtm: &DopplerTimeMap, norm: Norm) -> DopplerTimeMap {
    let mut out = dtm.clone();
    let scale = match norm {
        Norm::Max => dtm.magnitudes.iter().cloned().fold(0.0f64, f64::max),
        Norm::Energy => (dtm.magnitudes.iter().map(|v| v * v).sum::<f64>()
            / dtm.magnitudes.len() as f64)
            .sqrt(),
    };
    if scale > 0.0 {
        out.magnitudes.map_inplace(|v| *v /= scale);
    }
    out
}

struct Variant {
    norm: Norm,
    source: SliceSource,
    sigma: f64,
    lam: f64,
}

fn stats(dtm: &DopplerTimeMap, v: &Variant) -> (f64, f64) {
    let env_cfg = SmoothingConfig {
        gaussian_sigma: v.sigma,
        kernel_radius: (2.0 * v.sigma).ceil() as usize + 1,
        ratio_micro: v.lam,
        ratio_torso: 0.55,
        ..SmoothingConfig::default()
    };
    let map = normalized(dtm, v.norm);
    let smoothed = gaussian_smooth(&map, &env_cfg);
    let (eta_m, eta_t) = adaptive_thresholds(&smoothed, &env_cfg).unwrap();
    let raw = scan_envelopes(&smoothed, eta_m, eta_t);
    let env = fill_and_smooth(&raw, &env_cfg, map.n_freq()).unwrap();
    let source = match v.source {
        SliceSource::Raw => &map,
        SliceSource::Smoothed => &smoothed,
    };
    let chtm = build_chtm(source, &env, Region::Micro, 32, 1e-6).unwrap();
    let rawc = &chtm.raw_coefficients;
    let c2 = rawc.row(2).iter().map(|c| c.abs()).sum::<f64>() / rawc.ncols() as f64;
    let hi: f64 = (3..rawc.nrows())
        .map(|n| rawc.row(n).iter().map(|c| c * c).sum::<f64>())
        .sum();
    (c2, hi)
}

#[test]
#[ignore]
fn probe_variant_grid() {
    let cfg = PipelineConfig::default();
    let n_trials = 60u64;

    let mut dtms: Vec<(DopplerTimeMap, DopplerTimeMap)> = Vec::new();
    for trial in 0..n_trials {
        let specs = generate_specs(&GaitConfig::default(), 1, 1000 + trial).unwrap();
        let nw = specs
            .iter()
            .find(|s| s.label.threat == Threat::Unarmed)
            .unwrap();
        let mut aw_gait = nw.gait.clone();
        aw_gait.pattern = Threat::Armed.pattern();
        let (_, p_nw) = simulate_with_cube(&nw.gait, nw.start_time, &cfg, None).unwrap();
        let (_, p_aw) = simulate_with_cube(&aw_gait, nw.start_time, &cfg, None).unwrap();
        dtms.push((p_nw.dtm, p_aw.dtm));
    }

    for (norm, nname) in [(Norm::Max, "max"), (Norm::Energy, "energy")] {
        for (source, sname) in [(SliceSource::Raw, "raw"), (SliceSource::Smoothed, "smooth")] {
            for sigma in [1.5f64, 2.5] {
                for lam in [0.15f64, 0.12, 0.10] {
                    let v = Variant {
                        norm,
                        source,
                        sigma,
                        lam,
                    };
                    let mut c2_wins = 0;
                    let mut hi_wins = 0;
                    for (dtm_nw, dtm_aw) in &dtms {
                        let (c2n, hin) = stats(dtm_nw, &v);
                        let (c2a, hia) = stats(dtm_aw, &v);
                        if c2n > c2a {
                            c2_wins += 1;
                        }
                        if hin > hia {
                            hi_wins += 1;
                        }
                    }
                    println!(
                        "{nname:6} {sname:6} sigma {sigma:.1} lam {lam:.2}: c2 {c2_wins}/{n_trials} hiAbs {hi_wins}/{n_trials}"
                    );
                }
            }
        }
    }

    // Envelope physicality for the same parameter grid (normalization has
    // no effect on threshold ratios, so check once per sigma/lam).
    let gait = GaitConfig::default();
    let (_, products) = simulate_with_cube(&gait, 0.0, &cfg, None).unwrap();
    let center = radar_center(&cfg.radar);
    let c = Vector3::new(center[0], center[1], center[2]);
    let mut oracle: f64 = 0.0;
    for i in 0..200 {
        let t = i as f64 * cfg.radar.prt;
        oracle = oracle.max(expected_peak_doppler(&gait, t, c, cfg.radar.wavelength(), true));
    }
    for sigma in [1.5f64, 2.5] {
        for lam in [0.15f64, 0.12, 0.10] {
            let env_cfg = SmoothingConfig {
                gaussian_sigma: sigma,
                kernel_radius: (2.0 * sigma).ceil() as usize + 1,
                ratio_micro: lam,
                ratio_torso: 0.55,
                ..SmoothingConfig::default()
            };
            let map = normalized(&products.dtm, Norm::Max);
            let smoothed = gaussian_smooth(&map, &env_cfg);
            let (eta_m, eta_t) = adaptive_thresholds(&smoothed, &env_cfg).unwrap();
            let raw = scan_envelopes(&smoothed, eta_m, eta_t);
            let env = fill_and_smooth(&raw, &env_cfg, map.n_freq()).unwrap();
            let axis = &map.doppler_axis;
            let mut env_max: f64 = 0.0;
            for m in 0..env.n_columns() {
                let up = axis[env.micro_upper[m].round().clamp(0.0, 127.0) as usize].abs();
                let low = axis[env.micro_lower[m].round().clamp(0.0, 127.0) as usize].abs();
                env_max = env_max.max(up).max(low);
            }
            println!(
                "physicality sigma {sigma:.1} lam {lam:.2}: ratio {:.3}",
                env_max / oracle
            );
        }
    }
}
