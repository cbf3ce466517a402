//! Through-the-wall FMCW echo synthesis.
//!
//! Each skeleton joint is treated as a point scatterer. Per pulse, the
//! dechirped IF contribution of a scatterer is a complex tone whose
//! fast-time frequency encodes the equivalent electrical range (free-space
//! path plus the wall's optical path difference) and whose pulse-to-pulse
//! phase encodes Doppler. Channels of a MIMO array are summed coherently.

use ndarray::{Array2, ShapeBuilder};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::kinematics::{JointId, SkeletonPose};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wave impedance, ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 377.0;

/// FMCW radar waveform and sampling parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RadarConfig {
    /// Center frequency, Hz.
    pub center_frequency: f64,
    /// Sweep bandwidth, Hz.
    pub bandwidth: f64,
    /// Pulse (chirp) width, s.
    pub pulse_width: f64,
    /// Chirp slope, Hz/s. Must equal bandwidth / pulse_width.
    pub chirp_slope: f64,
    /// Transmit power, W.
    pub tx_power: f64,
    /// Fast-time samples per pulse.
    pub fast_samples: usize,
    /// Fast-time sampling rate, Hz.
    pub fast_sampling_rate: f64,
    /// Number of pulses (slow-time samples).
    pub pulses: usize,
    /// Pulse repetition time, s.
    pub prt: f64,
    pub tx_positions: Vec<[f64; 3]>,
    pub rx_positions: Vec<[f64; 3]>,
}

impl Default for RadarConfig {
    fn default() -> Self {
        let pulse_width = 0.5e-3;
        let bandwidth = 1.0e9;
        let fast_samples = 3190;
        Self {
            center_frequency: 2.5e9,
            bandwidth,
            pulse_width,
            chirp_slope: bandwidth / pulse_width,
            tx_power: 1.0,
            fast_samples,
            fast_sampling_rate: fast_samples as f64 / pulse_width,
            pulses: 200,
            prt: 5e-3,
            tx_positions: vec![[0.0, 0.0, 1.5]],
            rx_positions: vec![[0.0, 0.0, 1.5]],
        }
    }
}

impl RadarConfig {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.center_frequency
    }

    /// Effective slow-time sampling rate, Hz.
    pub fn slow_rate(&self) -> f64 {
        1.0 / self.prt
    }

    /// Replace the single-channel default with uniform linear tx/rx arrays
    /// along y at half-wavelength spacing, centered on `center`.
    pub fn with_uniform_arrays(mut self, n_tx: usize, n_rx: usize, center: [f64; 3]) -> Self {
        let spacing = self.wavelength() / 2.0;
        let line = |n: usize| -> Vec<[f64; 3]> {
            (0..n)
                .map(|i| {
                    let offset = (i as f64 - (n as f64 - 1.0) / 2.0) * spacing;
                    [center[0], center[1] + offset, center[2]]
                })
                .collect()
        };
        self.tx_positions = line(n_tx);
        self.rx_positions = line(n_rx);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center_frequency > 0.0) {
            return Err(CoreError::invalid_config(
                "radar.center_frequency",
                "must be positive",
            ));
        }
        if !(self.bandwidth > 0.0) || !(self.pulse_width > 0.0) {
            return Err(CoreError::invalid_config(
                "radar.bandwidth/pulse_width",
                "must be positive",
            ));
        }
        let rel = (self.chirp_slope * self.pulse_width - self.bandwidth).abs() / self.bandwidth;
        if rel > 1e-6 {
            return Err(CoreError::invalid_config(
                "radar.chirp_slope",
                format!("K * T_p != B (relative error {rel:.2e})"),
            ));
        }
        if self.fast_samples == 0 || self.pulses == 0 {
            return Err(CoreError::invalid_config(
                "radar.fast_samples/pulses",
                "must be nonzero",
            ));
        }
        if self.fast_samples as f64 / self.fast_sampling_rate > self.pulse_width * (1.0 + 1e-9) {
            return Err(CoreError::invalid_config(
                "radar.fast_sampling_rate",
                "N_ADC / f_s exceeds the pulse width",
            ));
        }
        if self.tx_positions.is_empty() || self.rx_positions.is_empty() {
            return Err(CoreError::invalid_config(
                "radar.tx_positions/rx_positions",
                "need at least one tx and one rx",
            ));
        }
        if !(self.prt > 0.0) || self.prt < self.pulse_width {
            return Err(CoreError::invalid_config(
                "radar.prt",
                "must be positive and at least the pulse width",
            ));
        }
        Ok(())
    }
}

/// Axis along which the wall slab extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn component(self, p: [f64; 3]) -> f64 {
        match self {
            Axis::X => p[0],
            Axis::Y => p[1],
            Axis::Z => p[2],
        }
    }
}

/// Single-layer homogeneous wall slab.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct WallConfig {
    /// Wall thickness, m.
    pub thickness: f64,
    /// Relative permittivity (1 = free space).
    pub relative_permittivity: f64,
    pub loss_tangent: f64,
    /// Normal axis of the slab.
    pub normal_axis: Axis,
    /// Slab occupies normal-axis coordinates in [slab_min, slab_max].
    pub slab_min: f64,
    pub slab_max: f64,
}

impl Default for WallConfig {
    fn default() -> Self {
        Self {
            thickness: 0.24,
            relative_permittivity: 6.0,
            loss_tangent: 0.03,
            normal_axis: Axis::X,
            slab_min: 0.5,
            slab_max: 0.74,
        }
    }
}

impl WallConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thickness < 0.0 {
            return Err(CoreError::invalid_config("wall.thickness", "must be >= 0"));
        }
        if self.relative_permittivity < 1.0 {
            return Err(CoreError::invalid_config(
                "wall.relative_permittivity",
                "must be >= 1",
            ));
        }
        if self.loss_tangent < 0.0 {
            return Err(CoreError::invalid_config("wall.loss_tangent", "must be >= 0"));
        }
        if self.slab_max < self.slab_min {
            return Err(CoreError::invalid_config(
                "wall.slab_max",
                "must be >= slab_min",
            ));
        }
        Ok(())
    }

    /// Does the straight segment `a -> b` cross the slab interval?
    pub fn segment_crosses(&self, a: [f64; 3], b: [f64; 3]) -> bool {
        let (ca, cb) = (self.normal_axis.component(a), self.normal_axis.component(b));
        let (lo, hi) = (ca.min(cb), ca.max(cb));
        lo < self.slab_max && hi > self.slab_min
    }
}

/// Propagation quantities of a wall at carrier frequency `f_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallTerms {
    /// One-way optical path difference, m.
    pub path_difference: f64,
    /// Two-way Fresnel power transmission coefficient.
    pub power_transmission: f64,
    /// Two-way dielectric loss factor exp(-2 alpha d).
    pub loss_factor: f64,
    /// Medium attenuation constant, Np/m.
    pub attenuation: f64,
}

/// Optical path difference, transmission, and attenuation of the wall.
pub fn wall_terms(wall: &WallConfig, f_c: f64) -> WallTerms {
    let sqrt_eps = wall.relative_permittivity.sqrt();
    let path_difference = wall.thickness * (sqrt_eps - 1.0);
    let eta_w = FREE_SPACE_IMPEDANCE / sqrt_eps;
    let denom = eta_w + FREE_SPACE_IMPEDANCE;
    let power_transmission =
        (2.0 * eta_w / denom).powi(2) * (2.0 * FREE_SPACE_IMPEDANCE / denom).powi(2);
    let attenuation = PI * f_c * sqrt_eps * wall.loss_tangent / SPEED_OF_LIGHT;
    let loss_factor = (-2.0 * attenuation * wall.thickness).exp();
    WallTerms {
        path_difference,
        power_transmission,
        loss_factor,
        attenuation,
    }
}

/// Total equivalent electrical length tx -> target -> rx, adding the wall's
/// optical path difference once per path leg that crosses the slab.
pub fn electrical_length(p: [f64; 3], tx: [f64; 3], rx: [f64; 3], wall: &WallConfig) -> f64 {
    let d = |a: [f64; 3], b: [f64; 3]| {
        let dx = a[0] - b[0];
        let dy = a[1] - b[1];
        let dz = a[2] - b[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    };
    let delta = wall_terms(wall, 1.0).path_difference;
    let mut total = d(p, tx) + d(p, rx);
    if wall.segment_crosses(tx, p) {
        total += delta;
    }
    if wall.segment_crosses(rx, p) {
        total += delta;
    }
    total
}

/// Per-joint radar cross-section amplitude weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ScattererSet {
    pub weights: BTreeMap<JointId, f64>,
}

impl Default for ScattererSet {
    fn default() -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(JointId::Torso, 1.0);
        weights.insert(JointId::Head, 0.4);
        weights.insert(JointId::Hip, 0.6);
        weights.insert(JointId::RightShoulder, 0.2);
        weights.insert(JointId::LeftShoulder, 0.2);
        weights.insert(JointId::RightKnee, 0.2);
        weights.insert(JointId::LeftKnee, 0.2);
        weights.insert(JointId::RightElbow, 0.2);
        weights.insert(JointId::LeftElbow, 0.2);
        weights.insert(JointId::RightAnkle, 0.25);
        weights.insert(JointId::LeftAnkle, 0.25);
        weights.insert(JointId::RightHand, 0.25);
        weights.insert(JointId::LeftHand, 0.25);
        weights.insert(JointId::GunStock, 0.3);
        weights.insert(JointId::GunBody, 0.3);
        weights.insert(JointId::GunMuzzle, 0.3);
        Self { weights }
    }
}

impl ScattererSet {
    pub fn get(&self, id: JointId) -> f64 {
        self.weights.get(&id).copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.values().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(CoreError::invalid_config(
                "scatterers",
                "weights must be finite and nonnegative",
            ));
        }
        if !self.weights.values().any(|&w| w > 0.0) {
            return Err(CoreError::invalid_config(
                "scatterers",
                "at least one weight must be positive",
            ));
        }
        Ok(())
    }
}

/// Complex IF samples, fast-time sample x pulse.
#[derive(Debug, Clone)]
pub struct IfDataCube {
    pub samples: Array2<Complex64>,
    pub radar: RadarConfig,
    pub slow_time_axis: Vec<f64>,
}

impl IfDataCube {
    pub fn n_fast(&self) -> usize {
        self.samples.nrows()
    }

    pub fn n_pulses(&self) -> usize {
        self.samples.ncols()
    }
}

/// Synthesize the IF data cube for a slow-time series of poses.
///
/// `poses` must contain exactly `radar.pulses` entries sampled at PRT
/// spacing. All tx/rx channel pairs are summed coherently.
pub fn synthesize_cube(
    poses: &[SkeletonPose],
    radar: &RadarConfig,
    wall: &WallConfig,
    scatterers: &ScattererSet,
) -> Result<IfDataCube> {
    if poses.len() != radar.pulses {
        return Err(CoreError::DimensionMismatch {
            what: "synthesize_cube pose series",
            expected: radar.pulses,
            actual: poses.len(),
        });
    }
    let terms = wall_terms(wall, radar.center_frequency);
    let amp_scale = (terms.power_transmission * terms.loss_factor * radar.tx_power).sqrt();
    let n_fast = radar.fast_samples;
    // Column-major so each pulse is a contiguous slice.
    let mut samples = Array2::<Complex64>::zeros((n_fast, radar.pulses).f());

    for (m, pose) in poses.iter().enumerate() {
        let mut column = samples.column_mut(m);
        let col = column.as_slice_mut().expect("column-major slice");
        for (joint, position) in pose.joints() {
            let sigma = scatterers.get(*joint);
            if sigma == 0.0 {
                continue;
            }
            let p = [position.x, position.y, position.z];
            for tx in &radar.tx_positions {
                for rx in &radar.rx_positions {
                    let r_sum = electrical_length(p, *tx, *rx, wall);
                    let r_tx = dist(p, *tx);
                    let r_rx = dist(p, *rx);
                    let tau = r_sum / SPEED_OF_LIGHT;
                    let amp = sigma * amp_scale / (r_tx * r_rx);
                    // Carrier term keeps the paper's sign (approach -> positive
                    // Doppler); the beat term is conjugated so the range DFT
                    // maps targets to positive range bins.
                    let mut phasor = Complex64::from_polar(amp, -2.0 * PI * radar.center_frequency * tau);
                    let step = Complex64::from_polar(
                        1.0,
                        2.0 * PI * radar.chirp_slope * tau / radar.fast_sampling_rate,
                    );
                    for s in col.iter_mut() {
                        *s += phasor;
                        phasor *= step;
                    }
                }
            }
        }
    }

    let slow_time_axis = (0..radar.pulses).map(|m| m as f64 * radar.prt).collect();
    Ok(IfDataCube {
        samples,
        radar: radar.clone(),
        slow_time_axis,
    })
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Add circular complex white Gaussian noise at `delta_snr_db` below the
/// mean signal power. `f64::INFINITY` is the no-noise sentinel. Deterministic
/// for a given seed.
pub fn add_noise(cube: &IfDataCube, delta_snr_db: f64, seed: u64) -> Result<IfDataCube> {
    if delta_snr_db.is_infinite() && delta_snr_db > 0.0 {
        return Ok(cube.clone());
    }
    let n = cube.samples.len();
    let signal_power = cube.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / n as f64;
    if signal_power == 0.0 {
        return Err(CoreError::DegenerateInput(
            "add_noise: all-zero cube has undefined signal power".into(),
        ));
    }
    let noise_power = signal_power * 10f64.powf(-delta_snr_db / 10.0);
    let scale = (noise_power / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = cube.clone();
    // Row-major iteration order of ndarray is deterministic.
    for s in out.samples.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *s += Complex64::new(scale * re, scale * im);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::JointId;
    use nalgebra::Vector3;

    fn point_pose(t: f64, p: [f64; 3]) -> SkeletonPose {
        SkeletonPose::new(t, vec![(JointId::Torso, Vector3::from(p))])
    }

    fn point_scatterer() -> ScattererSet {
        let mut weights = BTreeMap::new();
        weights.insert(JointId::Torso, 1.0);
        ScattererSet { weights }
    }

    fn free_space() -> WallConfig {
        WallConfig {
            relative_permittivity: 1.0,
            loss_tangent: 0.0,
            ..WallConfig::default()
        }
    }

    fn small_radar(pulses: usize) -> RadarConfig {
        let fast_samples = 512;
        let pulse_width = 0.5e-3;
        RadarConfig {
            fast_samples,
            fast_sampling_rate: fast_samples as f64 / pulse_width,
            pulses,
            ..RadarConfig::default()
        }
    }

    #[test]
    fn wall_terms_table_values() {
        let w = WallConfig::default();
        let t = wall_terms(&w, 2.5e9);
        // d (sqrt(6) - 1) = 0.347878 m.
        assert!((t.path_difference - 0.24 * (6f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((t.path_difference - 0.3478).abs() < 1e-3);
        assert!((t.power_transmission - 0.678).abs() < 1e-3);
        assert!(t.loss_factor > 0.0 && t.loss_factor < 1.0);
        assert!(t.power_transmission > 0.0 && t.power_transmission <= 1.0);
    }

    #[test]
    fn wall_degenerates_to_free_space() {
        let t = wall_terms(&free_space(), 2.5e9);
        assert_eq!(t.path_difference, 0.0);
        assert!((t.power_transmission - 1.0).abs() < 1e-12);
        assert_eq!(t.loss_factor, 1.0);
    }

    #[test]
    fn electrical_length_examples() {
        let tx = [0.0, 0.0, 1.0];
        let p = [3.0, 0.0, 1.0];
        assert!((electrical_length(p, tx, tx, &free_space()) - 6.0).abs() < 1e-12);

        let wall = WallConfig::default();
        let expected = 6.0 + 2.0 * 0.24 * (6f64.sqrt() - 1.0);
        let got = electrical_length(p, tx, tx, &wall);
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 6.6955).abs() < 1e-3);

        // Target on the radar side of the slab: no wall term.
        let behind = [-2.0, 0.0, 1.0];
        assert!((electrical_length(behind, tx, tx, &wall) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn electrical_length_reciprocity() {
        let wall = WallConfig::default();
        let p = [3.2, 0.4, 1.1];
        let tx = [0.0, -0.1, 1.5];
        let rx = [0.0, 0.2, 1.5];
        assert_eq!(
            electrical_length(p, tx, rx, &wall),
            electrical_length(p, rx, tx, &wall)
        );
    }

    #[test]
    fn static_point_gives_identical_columns() {
        let radar = small_radar(8);
        let poses: Vec<_> = (0..8)
            .map(|m| point_pose(m as f64 * radar.prt, [3.0, 0.0, 1.5]))
            .collect();
        let cube = synthesize_cube(&poses, &radar, &free_space(), &point_scatterer()).unwrap();
        let first = cube.samples.column(0).to_owned();
        for m in 1..8 {
            for (a, b) in first.iter().zip(cube.samples.column(m)) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn beat_frequency_matches_round_trip_range() {
        // Round trip 6 m -> beat = K tau = 40 kHz for K = 2e12 Hz/s.
        let radar = small_radar(1);
        let poses = vec![point_pose(0.0, [3.0, 0.0, 1.5])];
        let cube = synthesize_cube(&poses, &radar, &free_space(), &point_scatterer()).unwrap();

        // Independent single-tone oracle: correlate against candidate tones.
        let col = cube.samples.column(0);
        let n = radar.fast_samples;
        let tone_power = |f_hz: f64| -> f64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, s) in col.iter().enumerate() {
                let ph = -2.0 * PI * f_hz * i as f64 / radar.fast_sampling_rate;
                acc += s * Complex64::from_polar(1.0, ph);
            }
            acc.norm_sqr() / (n * n) as f64
        };
        let expected = radar.chirp_slope * 6.0 / SPEED_OF_LIGHT;
        let bin = radar.fast_sampling_rate / n as f64;
        assert!((expected - 40_000.0).abs() < bin);
        // Peak of a frequency scan should sit within one bin of K*tau.
        let mut best = (0.0, f64::MIN);
        let mut f = 0.0;
        while f < 200_000.0 {
            let p = tone_power(f);
            if p > best.1 {
                best = (f, p);
            }
            f += bin / 4.0;
        }
        assert!(
            (best.0 - expected).abs() <= bin,
            "peak at {} Hz, expected {expected} Hz",
            best.0
        );
    }

    #[test]
    fn sigma_scaling_is_linear() {
        let radar = small_radar(4);
        let poses: Vec<_> = (0..4)
            .map(|m| point_pose(m as f64 * radar.prt, [2.5, 0.3, 1.2]))
            .collect();
        let base = synthesize_cube(&poses, &radar, &free_space(), &point_scatterer()).unwrap();
        let mut doubled = point_scatterer();
        doubled.weights.insert(JointId::Torso, 2.0);
        let twice = synthesize_cube(&poses, &radar, &free_space(), &doubled).unwrap();
        for (a, b) in base.samples.iter().zip(twice.samples.iter()) {
            assert_eq!(*b, *a * 2.0);
        }
    }

    #[test]
    fn pose_length_mismatch_is_error() {
        let radar = small_radar(4);
        let poses = vec![point_pose(0.0, [2.0, 0.0, 1.0])];
        assert!(synthesize_cube(&poses, &radar, &free_space(), &point_scatterer()).is_err());
    }

    #[test]
    fn noise_sentinel_and_determinism() {
        let radar = small_radar(4);
        let poses: Vec<_> = (0..4)
            .map(|m| point_pose(m as f64 * radar.prt, [2.0, 0.0, 1.0]))
            .collect();
        let cube = synthesize_cube(&poses, &radar, &free_space(), &point_scatterer()).unwrap();

        let clean = add_noise(&cube, f64::INFINITY, 1).unwrap();
        for (a, b) in cube.samples.iter().zip(clean.samples.iter()) {
            assert_eq!(a, b);
        }

        let n1 = add_noise(&cube, 0.0, 42).unwrap();
        let n2 = add_noise(&cube, 0.0, 42).unwrap();
        for (a, b) in n1.samples.iter().zip(n2.samples.iter()) {
            assert_eq!(a, b);
        }
        let n3 = add_noise(&cube, 0.0, 43).unwrap();
        assert!(n1.samples.iter().zip(n3.samples.iter()).any(|(a, b)| a != b));
    }

    #[test]
    fn noise_power_calibration() {
        let radar = RadarConfig::default();
        let poses: Vec<_> = (0..radar.pulses)
            .map(|m| point_pose(m as f64 * radar.prt, [3.0, 0.0, 1.5]))
            .collect();
        let cube = synthesize_cube(&poses, &radar, &free_space(), &point_scatterer()).unwrap();
        let noisy = add_noise(&cube, 0.0, 7).unwrap();

        let n = cube.samples.len() as f64;
        let signal_power = cube.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / n;
        let mut mean = Complex64::new(0.0, 0.0);
        let mut power = 0.0;
        for (a, b) in noisy.samples.iter().zip(cube.samples.iter()) {
            let d = a - b;
            mean += d;
            power += d.norm_sqr();
        }
        mean /= n;
        power /= n;
        assert!(
            (power - signal_power).abs() < 0.05 * signal_power,
            "noise power {power}, signal power {signal_power}"
        );
        // Empirical mean of the injected noise is zero within 3 sigma of
        // the estimator for each quadrature.
        let sigma_est = (power / 2.0 / n).sqrt();
        assert!(mean.re.abs() < 3.0 * sigma_est);
        assert!(mean.im.abs() < 3.0 * sigma_est);
    }

    #[test]
    fn all_zero_cube_rejects_finite_noise() {
        let radar = small_radar(2);
        let cube = IfDataCube {
            samples: Array2::zeros((radar.fast_samples, 2)),
            radar,
            slow_time_axis: vec![0.0, 5e-3],
        };
        assert!(add_noise(&cube, 0.0, 1).is_err());
        assert!(add_noise(&cube, f64::INFINITY, 1).is_ok());
    }

    #[test]
    fn default_radar_validates() {
        assert!(RadarConfig::default().validate().is_ok());
        assert!(WallConfig::default().validate().is_ok());
        assert!(ScattererSet::default().validate().is_ok());
        let bad = RadarConfig {
            chirp_slope: 1.0,
            ..RadarConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn mimo_arrays_centered() {
        let radar = RadarConfig::default().with_uniform_arrays(8, 8, [0.0, 0.0, 1.5]);
        assert_eq!(radar.tx_positions.len(), 8);
        assert_eq!(radar.rx_positions.len(), 8);
        let mean_y: f64 = radar.tx_positions.iter().map(|p| p[1]).sum::<f64>() / 8.0;
        assert!(mean_y.abs() < 1e-12);
        let spacing = radar.tx_positions[1][1] - radar.tx_positions[0][1];
        assert!((spacing - radar.wavelength() / 2.0).abs() < 1e-12);
    }
}
