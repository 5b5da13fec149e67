//! Run manifests: a JSON snapshot of the configuration plus one entry per
//! emitted map, so any run can be identified and reproduced exactly.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::PipelineConfig;

pub const MANIFEST_FILENAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleEntry {
    pub id: String,
    pub status: SampleStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compactness_map: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub foreground_map: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_map: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_superpixels: Option<usize>,
    /// (stage, milliseconds) pairs in execution order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings_ms: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: PipelineConfig,
    pub samples: Vec<SampleEntry>,
}

impl RunManifest {
    pub fn new(config: PipelineConfig) -> Self {
        Self {
            tool: "stereosal".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            samples: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Domain(format!("manifest serialization failed: {e}")))?;
        std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Domain(format!("malformed manifest {}: {e}", path.display())))
    }
}
