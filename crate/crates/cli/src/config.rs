//! Experiment configuration file (TOML).
//!
//! Every field has a default, and the defaults are the matched-steering
//! reference experiment: 8 sensors at λ/2, SOI at 0° with 10 dB SNR,
//! interferers at −30°/30°/70° with 20/20/40 dB INR, 100 snapshots, b = 12,
//! γ = 1, a 1° grid and 1000 trials. SNR and INR are converted to linear
//! powers exactly once, in [`ConfigFile::resolve`].

use std::path::Path;

use mspr_core::{AngleGrid, ArrayGeometry, CampaignConfig, Interferer, MsprConfig, Scene};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::manifest::RunManifest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArraySection {
    pub num_sensors: usize,
    pub spacing_wavelengths: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        Self {
            num_sensors: 8,
            spacing_wavelengths: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub step_deg: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { step_deg: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererEntry {
    pub doa_deg: f64,
    pub inr_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneSection {
    pub soi_doa_deg: f64,
    pub snr_db: f64,
    pub noise_power: f64,
    pub num_snapshots: usize,
    pub interferers: Vec<InterfererEntry>,
}

impl Default for SceneSection {
    fn default() -> Self {
        Self {
            soi_doa_deg: 0.0,
            snr_db: 10.0,
            noise_power: 1.0,
            num_snapshots: 100,
            interferers: vec![
                InterfererEntry { doa_deg: -30.0, inr_db: 20.0 },
                InterfererEntry { doa_deg: 30.0, inr_db: 20.0 },
                InterfererEntry { doa_deg: 70.0, inr_db: 40.0 },
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamformerSection {
    pub steer_angle_deg: f64,
    pub half_width_bins: usize,
    pub gamma: f64,
    pub max_iterations: usize,
    pub rel_tolerance: f64,
    pub relaxation: f64,
    /// Diagonal loading as a multiple of `trace(R̂)/M`.
    pub loading_factor: f64,
}

impl Default for BeamformerSection {
    fn default() -> Self {
        let mspr = MsprConfig::default();
        Self {
            steer_angle_deg: 0.0,
            half_width_bins: 12,
            gamma: mspr.gamma,
            max_iterations: mspr.max_iterations,
            rel_tolerance: mspr.rel_tolerance,
            relaxation: mspr.relaxation,
            loading_factor: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignSection {
    pub num_trials: usize,
    pub master_seed: u64,
}

impl Default for CampaignSection {
    fn default() -> Self {
        Self {
            num_trials: 1000,
            master_seed: 2011,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub array: ArraySection,
    pub grid: GridSection,
    pub scene: SceneSection,
    pub beamformer: BeamformerSection,
    pub campaign: CampaignSection,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl ConfigFile {
    pub fn from_toml_str(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Builds the campaign, converting SNR/INR from dB to linear powers
    /// relative to the noise power.
    pub fn resolve(&self) -> Result<CampaignConfig, mspr_core::Error> {
        let geometry = ArrayGeometry::new(self.array.num_sensors, self.array.spacing_wavelengths)?;
        let grid = AngleGrid::full(self.grid.step_deg)?;
        let noise = self.scene.noise_power;
        let interferers = self
            .scene
            .interferers
            .iter()
            .map(|i| Interferer {
                doa_deg: i.doa_deg,
                power: noise * db_to_linear(i.inr_db),
            })
            .collect();
        let scene = Scene::new(
            self.scene.soi_doa_deg,
            noise * db_to_linear(self.scene.snr_db),
            interferers,
            noise,
            self.scene.num_snapshots,
        )?;
        let b = &self.beamformer;
        let config = CampaignConfig {
            scene,
            geometry,
            grid,
            steer_angle_deg: b.steer_angle_deg,
            half_width_bins: b.half_width_bins,
            mspr: MsprConfig {
                gamma: b.gamma,
                max_iterations: b.max_iterations,
                rel_tolerance: b.rel_tolerance,
                relaxation: b.relaxation,
            },
            num_trials: self.campaign.num_trials,
            master_seed: self.campaign.master_seed,
            loading_factor: b.loading_factor,
        };
        config.validate()?;
        Ok(config)
    }
}

/// 1-based line of the first `key = ...` assignment in `text`.
fn line_of_key(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|line| {
        let t = line.trim_start();
        t.strip_prefix(key)
            .map(|rest| rest.trim_start().starts_with('='))
            .unwrap_or(false)
    })
    .map(|i| i + 1)
}

/// Reads a configuration file or a run manifest (whose `[config]` table is
/// used), then checks that it resolves.
pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!(
        "cannot read config file {}: {e}",
        path.display()
    )))?;
    let parsed = if RunManifest::looks_like_manifest(&text) {
        RunManifest::from_toml_str(&text).map(|m| m.config)
    } else {
        ConfigFile::from_toml_str(&text)
    };
    let config = parsed.map_err(|e| CliError::Usage(format!(
        "malformed config {}: {}",
        path.display(),
        e.to_string().trim_end()
    )))?;
    if let Err(e) = config.resolve() {
        let key = match &e {
            mspr_core::Error::InvalidParameter { name, .. } => name.rsplit('.').next().map(str::to_owned),
            mspr_core::Error::AngleOutOfRange { .. } => Some("soi_doa_deg".to_owned()),
            mspr_core::Error::OffGrid { .. } | mspr_core::Error::WindowOutOfBounds { .. } => {
                Some("steer_angle_deg".to_owned())
            }
            _ => None,
        };
        let anchor = key
            .and_then(|k| line_of_key(&text, &k))
            .map(|line| format!(" (line {line})"))
            .unwrap_or_default();
        return Err(CliError::Usage(format!(
            "invalid config {}{anchor}: {e}",
            path.display()
        )));
    }
    Ok(config)
}
