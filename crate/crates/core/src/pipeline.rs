//! End-to-end orchestration: gait sampling, echo synthesis, map
//! generation, envelope extraction, and ChTM projection under one
//! configuration bundle.

use serde::{Deserialize, Serialize};

use crate::chtm::{build_chtm, ChebyshevTimeMap, Region};
use crate::dsp::{
    build_dtm, build_rtm, mti_two_pulse, normalize_dtm, range_compress, stft_frame_times,
    stft_hamming, torso_compensated_slowtime, DopplerTimeMap, RangeTimeMap,
};
use crate::echo::{add_noise, synthesize_cube, IfDataCube, RadarConfig, ScattererSet, WallConfig};
use crate::envelope::{
    adaptive_thresholds, fill_and_smooth, gaussian_smooth, scan_envelopes, EnvelopeSet,
    SmoothingConfig,
};
use crate::error::{CoreError, Result};
use crate::kinematics::{pose_at, GaitConfig, JointId, SkeletonPose};

/// Map-generation parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DspConfig {
    /// Range FFT length (>= fast samples).
    pub n_fft: usize,
    /// STFT window length in slow-time samples.
    pub window_len: usize,
    /// STFT hop in slow-time samples.
    pub hop: usize,
    /// STFT FFT length (number of Doppler rows).
    pub fft_len: usize,
    /// Apply the conjugate torso phase before the STFT.
    pub compensate: bool,
    /// RTM display range, m.
    pub max_range: f64,
    /// Optional range gate (meters) applied to the slow-time sum.
    pub range_gate: Option<(f64, f64)>,
}

impl Default for DspConfig {
    fn default() -> Self {
        Self {
            n_fft: 4096,
            window_len: 64,
            hop: 2,
            fft_len: 128,
            compensate: true,
            max_range: 6.0,
            // Sum only the processed 0-6 m range region; a full-bin sum
            // collapses to N_FFT times fast-time sample zero and forfeits
            // the pulse-compression gain against noise.
            range_gate: Some((0.0, 6.0)),
        }
    }
}

impl DspConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_len == 0 || self.window_len % 2 != 0 {
            return Err(CoreError::invalid_config("dsp.window_len", "must be even and nonzero"));
        }
        if self.window_len > self.fft_len {
            return Err(CoreError::invalid_config("dsp.fft_len", "must be >= window_len"));
        }
        if self.hop == 0 {
            return Err(CoreError::invalid_config("dsp.hop", "must be >= 1"));
        }
        if !(self.max_range > 0.0) {
            return Err(CoreError::invalid_config("dsp.max_range", "must be positive"));
        }
        Ok(())
    }
}

/// ChTM projection parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ChtmParams {
    pub n_order: usize,
    pub epsilon: f64,
}

impl Default for ChtmParams {
    fn default() -> Self {
        Self {
            n_order: 32,
            epsilon: 1e-6,
        }
    }
}

impl ChtmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(CoreError::invalid_config("chtm.epsilon", "must be positive"));
        }
        Ok(())
    }
}

/// Everything needed to turn a gait config into maps and features.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct PipelineConfig {
    pub radar: RadarConfig,
    pub wall: WallConfig,
    pub scatterers: ScattererSet,
    pub dsp: DspConfig,
    pub envelope: SmoothingConfig,
    pub chtm: ChtmParams,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.radar.validate()?;
        self.wall.validate()?;
        self.scatterers.validate()?;
        self.dsp.validate()?;
        self.envelope.validate()?;
        self.chtm.validate()?;
        if self.dsp.n_fft < self.radar.fast_samples {
            return Err(CoreError::invalid_config(
                "dsp.n_fft",
                "must be >= radar.fast_samples",
            ));
        }
        Ok(())
    }
}

/// All artifacts produced for one sample.
#[derive(Debug, Clone)]
pub struct PipelineProducts {
    pub rtm: RangeTimeMap,
    pub dtm: DopplerTimeMap,
    pub envelopes: EnvelopeSet,
    pub chtm_macro: ChebyshevTimeMap,
    pub chtm_micro: ChebyshevTimeMap,
}

/// Sample the gait at PRT spacing starting from `start_time`.
pub fn walk_poses(gait: &GaitConfig, start_time: f64, radar: &RadarConfig) -> Vec<SkeletonPose> {
    (0..radar.pulses)
        .map(|m| pose_at(gait, start_time + m as f64 * radar.prt))
        .collect()
}

/// Geometric center of the antenna array.
pub fn radar_center(radar: &RadarConfig) -> [f64; 3] {
    let mut acc = [0.0; 3];
    let n = (radar.tx_positions.len() + radar.rx_positions.len()) as f64;
    for p in radar.tx_positions.iter().chain(&radar.rx_positions) {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v / n;
        }
    }
    acc
}

/// Per-pulse torso slant range used by the phase compensation.
pub fn torso_ranges(poses: &[SkeletonPose], center: [f64; 3]) -> Vec<f64> {
    poses
        .iter()
        .map(|pose| {
            let p = pose
                .position(JointId::Torso)
                .expect("pose without a torso joint");
            let dx = p.x - center[0];
            let dy = p.y - center[1];
            let dz = p.z - center[2];
            (dx * dx + dy * dy + dz * dz).sqrt()
        })
        .collect()
}

/// Run MTI, range compression, compensation, STFT, envelope extraction,
/// and both ChTM projections on an IF cube.
///
/// `torso_ranges_per_pulse` must cover every pulse of the input cube.
pub fn process_cube(
    cube: &IfDataCube,
    torso_ranges_per_pulse: &[f64],
    cfg: &PipelineConfig,
) -> Result<PipelineProducts> {
    let mti = mti_two_pulse(cube)?;
    let profiles = range_compress(&mti, cfg.dsp.n_fft)?;
    let rtm = build_rtm(&profiles, cfg.dsp.max_range);

    if torso_ranges_per_pulse.len() < mti.n_pulses() {
        return Err(CoreError::DimensionMismatch {
            what: "process_cube torso ranges",
            expected: mti.n_pulses(),
            actual: torso_ranges_per_pulse.len(),
        });
    }
    let slow = torso_compensated_slowtime(
        &profiles,
        &torso_ranges_per_pulse[..mti.n_pulses()],
        cube.radar.wavelength(),
        cfg.dsp.compensate,
        cfg.dsp.range_gate,
    )?;
    let signal = slow.to_vec();
    let tf = stft_hamming(&signal, cfg.dsp.window_len, cfg.dsp.hop, cfg.dsp.fft_len)?;
    let dtm = normalize_dtm(&build_dtm(
        &tf,
        cube.radar.slow_rate(),
        stft_frame_times(&mti.slow_time_axis, cfg.dsp.hop),
        cfg.dsp.compensate,
    ));

    let smoothed = gaussian_smooth(&dtm, &cfg.envelope);
    let (eta_micro, eta_torso) = adaptive_thresholds(&smoothed, &cfg.envelope)?;
    let raw_env = scan_envelopes(&smoothed, eta_micro, eta_torso);
    let envelopes = fill_and_smooth(&raw_env, &cfg.envelope, dtm.n_freq())?;

    // Project the smoothed image: the speckle-averaged slices carry the
    // band shape rather than per-pixel scintillation.
    let chtm_macro = build_chtm(
        &smoothed,
        &envelopes,
        Region::Macro,
        cfg.chtm.n_order,
        cfg.chtm.epsilon,
    )?;
    let chtm_micro = build_chtm(
        &smoothed,
        &envelopes,
        Region::Micro,
        cfg.chtm.n_order,
        cfg.chtm.epsilon,
    )?;

    Ok(PipelineProducts {
        rtm,
        dtm,
        envelopes,
        chtm_macro,
        chtm_micro,
    })
}

/// Synthesize one sample's cube (optionally with injected noise) and run the
/// full map chain on it.
pub fn simulate_products(
    gait: &GaitConfig,
    start_time: f64,
    cfg: &PipelineConfig,
    noise: Option<(f64, u64)>,
) -> Result<PipelineProducts> {
    let (_cube, products) = simulate_with_cube(gait, start_time, cfg, noise)?;
    Ok(products)
}

/// Like [`simulate_products`] but also hands back the (noisy) cube.
pub fn simulate_with_cube(
    gait: &GaitConfig,
    start_time: f64,
    cfg: &PipelineConfig,
    noise: Option<(f64, u64)>,
) -> Result<(IfDataCube, PipelineProducts)> {
    let poses = walk_poses(gait, start_time, &cfg.radar);
    let cube = synthesize_cube(&poses, &cfg.radar, &cfg.wall, &cfg.scatterers)?;
    let cube = match noise {
        Some((db, seed)) => add_noise(&cube, db, seed)?,
        None => cube,
    };
    let ranges = torso_ranges(&poses, radar_center(&cfg.radar));
    let products = process_cube(&cube, &ranges, cfg)?;
    Ok((cube, products))
}
