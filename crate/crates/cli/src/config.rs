//! TOML run configuration.
//!
//! The `gait`, `radar`, and `wall` sections are required; everything else
//! falls back to the library defaults. The config hash pins every artifact
//! to the exact configuration that produced it.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

use chtm_core::echo::{RadarConfig, ScattererSet, WallConfig};
use chtm_core::envelope::SmoothingConfig;
use chtm_core::kinematics::GaitConfig;
use chtm_core::pipeline::{ChtmParams, DspConfig, PipelineConfig};

use crate::error::{CliError, Result};

/// Radar section: explicit overrides on top of the library defaults, with
/// derived consistency for the chirp slope and sampling rate, plus uniform
/// array construction from channel counts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RadarSection {
    pub center_frequency: Option<f64>,
    pub bandwidth: Option<f64>,
    pub pulse_width: Option<f64>,
    pub chirp_slope: Option<f64>,
    pub tx_power: Option<f64>,
    pub fast_samples: Option<usize>,
    pub fast_sampling_rate: Option<f64>,
    pub pulses: Option<usize>,
    pub prt: Option<f64>,
    pub tx_count: Option<usize>,
    pub rx_count: Option<usize>,
    pub array_center: Option<[f64; 3]>,
    pub tx_positions: Option<Vec<[f64; 3]>>,
    pub rx_positions: Option<Vec<[f64; 3]>>,
}

impl RadarSection {
    pub fn to_config(&self) -> RadarConfig {
        let mut r = RadarConfig::default();
        if let Some(v) = self.center_frequency {
            r.center_frequency = v;
        }
        if let Some(v) = self.bandwidth {
            r.bandwidth = v;
        }
        if let Some(v) = self.pulse_width {
            r.pulse_width = v;
        }
        if let Some(v) = self.fast_samples {
            r.fast_samples = v;
        }
        if let Some(v) = self.pulses {
            r.pulses = v;
        }
        if let Some(v) = self.prt {
            r.prt = v;
        }
        if let Some(v) = self.tx_power {
            r.tx_power = v;
        }
        // Derived unless pinned explicitly.
        r.chirp_slope = self
            .chirp_slope
            .unwrap_or(r.bandwidth / r.pulse_width);
        r.fast_sampling_rate = self
            .fast_sampling_rate
            .unwrap_or(r.fast_samples as f64 / r.pulse_width);

        let center = self.array_center.unwrap_or([0.0, 0.0, 1.5]);
        if self.tx_count.is_some() || self.rx_count.is_some() {
            r = r.with_uniform_arrays(
                self.tx_count.unwrap_or(1),
                self.rx_count.unwrap_or(1),
                center,
            );
        }
        if let Some(p) = &self.tx_positions {
            r.tx_positions = p.clone();
        }
        if let Some(p) = &self.rx_positions {
            r.rx_positions = p.clone();
        }
        r
    }
}

/// Dataset and sweep parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalSection {
    pub per_class: usize,
    pub seed: u64,
    pub train_fraction: f64,
    pub snr_levels_db: Vec<f64>,
    pub orders: Vec<usize>,
    /// Noise level used when building the order-sweep dataset.
    pub dataset_noise_db: f64,
}

impl Default for EvalSection {
    fn default() -> Self {
        Self {
            per_class: 20,
            seed: 42,
            train_fraction: 0.8,
            snr_levels_db: vec![0.0, -8.0, -16.0],
            orders: vec![4, 8, 16, 32, 48, 64],
            dataset_noise_db: 0.0,
        }
    }
}

/// What `simulate` produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimulateMode {
    /// One sample from the base gait section.
    Single,
    /// The full labeled 8-class dataset.
    Dataset,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulateSection {
    pub mode: SimulateMode,
    /// Persist the IF cubes (large) next to the maps.
    pub write_cubes: bool,
    /// Optional noise injection for the simulated cubes, dB below mean
    /// signal power.
    pub noise_db: Option<f64>,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            mode: SimulateMode::Single,
            write_cubes: false,
            noise_db: None,
        }
    }
}

/// Full run configuration. `gait`, `radar`, and `wall` must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub gait: GaitConfig,
    pub radar: RadarSection,
    pub wall: WallConfig,
    #[serde(default)]
    pub scatterers: ScattererSet,
    #[serde(default)]
    pub dsp: DspConfig,
    #[serde(default)]
    pub envelope: SmoothingConfig,
    #[serde(default)]
    pub chtm: ChtmParams,
    #[serde(default)]
    pub eval: EvalSection,
    #[serde(default)]
    pub simulate: SimulateSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig = toml::from_str(&text)?;
        Ok(cfg)
    }

    pub fn pipeline_config(&self) -> PipelineConfig {
        PipelineConfig {
            radar: self.radar.to_config(),
            wall: self.wall.clone(),
            scatterers: self.scatterers.clone(),
            dsp: self.dsp.clone(),
            envelope: self.envelope.clone(),
            chtm: self.chtm.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.gait.validate()?;
        self.pipeline_config().validate()?;
        if self.eval.per_class == 0 {
            return Err(CliError::validation("eval.per_class must be >= 1"));
        }
        if !(self.eval.train_fraction > 0.0 && self.eval.train_fraction < 1.0) {
            return Err(CliError::validation("eval.train_fraction must be in (0, 1)"));
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON form of the configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serialization");
        let digest = Sha256::digest(json.as_bytes());
        hex::encode(digest)
    }
}
