//! Run manifests: what was run, with which resolved configuration, and the
//! digest of every file it wrote.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::io;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    /// Path relative to the output directory.
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: RunConfig,
    pub version: String,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
    pub exit_code: i32,
    pub outputs: Vec<OutputDigest>,
}

pub fn version_string() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(dir: &Path, file: &str) -> Result<OutputDigest> {
    let bytes = std::fs::read(dir.join(file))?;
    Ok(OutputDigest { file: file.to_string(), sha256: sha256_hex(&bytes), bytes: bytes.len() as u64 })
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let json = serde_json::to_vec_pretty(self)?;
        io::write_atomic(&dir.join(MANIFEST_FILE), &json)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Files whose digest differs from `other` (or is missing there).
    pub fn mismatches(&self, other: &RunManifest) -> Vec<String> {
        let mut bad: Vec<String> = self
            .outputs
            .iter()
            .filter(|o| !other.outputs.iter().any(|p| p.file == o.file && p.sha256 == o.sha256))
            .map(|o| o.file.clone())
            .collect();
        bad.extend(
            other.outputs.iter().filter(|p| !self.outputs.iter().any(|o| o.file == p.file)).map(|p| p.file.clone()),
        );
        bad
    }
}
