//! D₂ estimates as replayable records.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::atomic_write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Spectral,
    SpectralLattice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D2Estimate {
    pub value: f64,
    pub method: Method,
    /// Standard error (direct) or truncation bound (spectral).
    pub error: f64,
    pub n: usize,
    pub body_fingerprint: String,
    /// Sample counts and seed, or radius R and class counts.
    pub parameters: serde_json::Value,
    pub warnings: Vec<String>,
}

impl D2Estimate {
    pub fn to_json(&self) -> Result<Vec<u8>> {
        serde_json::to_vec_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        atomic_write(path, &self.to_json()?)
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        serde_json::from_slice(&std::fs::read(path)?).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}
