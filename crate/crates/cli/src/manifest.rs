//! Run manifests: everything needed to reproduce a run bit-exactly.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use cscale_core::DetectionConfig;
use serde::{Deserialize, Serialize};

/// Provenance of one input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub columns: Vec<String>,
    pub rows: usize,
    pub sample_interval: f64,
}

/// Snapshot of a run: configuration, seeds, input provenance and timing.
/// The config and inputs suffice to reproduce the outputs bit-exactly;
/// timing is informational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: DetectionConfig,
    pub inputs: Vec<InputRecord>,
    pub threads: Option<usize>,
    pub started_unix: u64,
    pub elapsed_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, config: DetectionConfig) -> Self {
        Self {
            tool: "cscale".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            inputs: Vec::new(),
            threads: None,
            started_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            elapsed_seconds: 0.0,
        }
    }

    pub fn record_input(&mut self, path: &Path, columns: Vec<String>, rows: usize, sample_interval: f64) {
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            columns,
            rows,
            sample_interval,
        });
    }
}
