//! Run manifests: every command that writes files also records the exact
//! command line, seeds, tolerances and SHA-256 digests of its inputs and
//! outputs. Re-running the same command reproduces byte-identical outputs
//! (the timestamp field aside).

use crate::say;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct ManifestJson {
    command: Vec<String>,
    version: String,
    seed: Option<u64>,
    tol: f64,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    wall_clock_seconds: f64,
    timestamp_unix: u64,
}

/// Tracks file traffic for one command invocation.
pub struct RunContext {
    pub out_dir: PathBuf,
    pub tol: f64,
    seed: Option<u64>,
    argv: Vec<String>,
    started: Instant,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

impl RunContext {
    pub fn new(out_dir: &Path, tol: f64) -> anyhow::Result<Self> {
        std::fs::create_dir_all(out_dir)?;
        Ok(RunContext {
            out_dir: out_dir.to_path_buf(),
            tol,
            seed: None,
            argv: std::env::args().collect(),
            started: Instant::now(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn read_to_string(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
        self.inputs.push(path.to_path_buf());
        Ok(text)
    }

    pub fn read_json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> anyhow::Result<T> {
        let text = self.read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| anyhow::anyhow!("parsing {}: {e}", path.display()))
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_text(name, &text)
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> anyhow::Result<PathBuf> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, text)?;
        self.outputs.push(path.clone());
        say!("wrote {}", path.display());
        Ok(path)
    }

    /// Write `manifest.json` describing the finished run.
    pub fn finish(self) -> anyhow::Result<()> {
        let digest = |paths: &[PathBuf]| -> anyhow::Result<Vec<FileDigest>> {
            paths
                .iter()
                .map(|p| {
                    let bytes = std::fs::read(p)?;
                    let mut hasher = Sha256::new();
                    hasher.update(&bytes);
                    Ok(FileDigest {
                        path: p.display().to_string(),
                        sha256: format!("{:x}", hasher.finalize()),
                    })
                })
                .collect()
        };
        let manifest = ManifestJson {
            command: self.argv.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.seed,
            tol: self.tol,
            inputs: digest(&self.inputs)?,
            outputs: digest(&self.outputs)?,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        let path = self.out_dir.join("manifest.json");
        std::fs::write(&path, text)?;
        say!("wrote {}", path.display());
        Ok(())
    }
}
