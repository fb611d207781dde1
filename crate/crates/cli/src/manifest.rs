use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::ConfigFile;
use crate::output::write_atomic;

pub const MANIFEST_FILE: &str = "manifest.toml";
const MANIFEST_VERSION: u32 = 1;

/// Record of one CLI run. Feeding it back through `--config` reproduces the
/// run's CSV outputs byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub manifest_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub master_seed: u64,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gammas: Vec<f64>,
    pub config: ConfigFile,
}

pub fn unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

impl RunManifest {
    pub fn new(command: &str, config: &ConfigFile, started_unix_ms: u64) -> Self {
        Self {
            manifest_version: MANIFEST_VERSION,
            tool: env!("CARGO_PKG_NAME").to_owned(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.to_owned(),
            master_seed: config.campaign.master_seed,
            started_unix_ms,
            finished_unix_ms: started_unix_ms,
            outputs: Vec::new(),
            gammas: Vec::new(),
            config: config.clone(),
        }
    }

    pub fn looks_like_manifest(text: &str) -> bool {
        text.lines().any(|l| l.trim_start().starts_with("manifest_version"))
    }

    pub fn from_toml_str(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }

    pub fn write(&mut self, dir: &Path) -> std::io::Result<()> {
        self.finished_unix_ms = unix_ms();
        write_atomic(&dir.join(MANIFEST_FILE), self.to_toml_string().as_bytes())
    }
}
