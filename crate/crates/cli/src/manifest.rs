use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::runner::{db_label, Artifacts, Experiment, RunStatus};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: Experiment,
    pub db_convention: &'static str,
    pub threads: usize,
    pub status: RunStatus,
    pub notes: Vec<String>,
    /// Effective configuration as TOML; loads back to the same config.
    pub config: String,
    pub outputs: Vec<OutputEntry>,
    pub duration_s: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes every artifact, then the manifest.
pub fn write_all(
    dir: &Path,
    experiment: Experiment,
    cfg: &RunConfig,
    threads: usize,
    artifacts: &Artifacts,
    elapsed: Duration,
) -> anyhow::Result<RunManifest> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut outputs = Vec::with_capacity(artifacts.files.len());
    for (name, body) in &artifacts.files {
        let path = dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        outputs.push(OutputEntry {
            path: name.clone(),
            bytes: body.len(),
            sha256: sha256_hex(body),
        });
    }
    let manifest = RunManifest {
        tool: env!("CARGO_BIN_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment,
        db_convention: db_label(cfg.db_convention),
        threads,
        status: artifacts.status,
        notes: artifacts.notes.clone(),
        config: cfg.to_toml(),
        outputs,
        duration_s: elapsed.as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    let path = dir.join(MANIFEST_NAME);
    fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(manifest)
}
