//! Result bundles: CSV artifacts plus a manifest tying them to the exact
//! configuration and seeds that produced them.
//!
//! Data artifacts are byte-reproducible for a given config and seed,
//! independent of worker count. The manifest additionally records per-task
//! wall times, which naturally vary between runs and are excluded from any
//! reproducibility comparison.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArtifactRecord {
    pub name: String,
    pub file: String,
    pub rows: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskTiming {
    pub task: String,
    pub wall_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    /// FNV-1a 64 hash of the canonical config (provenance check, not
    /// cryptographic).
    pub config_hash: String,
    pub master_seed: u64,
    pub software_version: String,
    pub config: String,
    pub artifacts: Vec<ArtifactRecord>,
    pub timings: Vec<TaskTiming>,
}

/// A finished experiment: output directory, artifacts and manifest.
pub struct ResultBundle {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
}

impl ResultBundle {
    pub fn artifact_path(&self, name: &str) -> Option<PathBuf> {
        self.manifest
            .artifacts
            .iter()
            .find(|a| a.name == name)
            .map(|a| self.out_dir.join(&a.file))
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Incrementally built bundle; experiments register artifacts and timings as
/// they are produced, then `finish` writes `manifest.json`.
pub struct BundleWriter {
    out_dir: PathBuf,
    config: ExperimentConfig,
    artifacts: Vec<ArtifactRecord>,
    timings: Vec<TaskTiming>,
}

impl BundleWriter {
    pub fn create(out_dir: &Path, config: &ExperimentConfig) -> anyhow::Result<Self> {
        std::fs::create_dir_all(out_dir)
            .with_context(|| format!("creating output directory {}", out_dir.display()))?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            config: config.clone(),
            artifacts: Vec::new(),
            timings: Vec::new(),
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    /// Write one CSV artifact: a header row and then data rows.
    pub fn write_csv<R: AsRef<[String]>>(
        &mut self,
        name: &str,
        file: &str,
        header: &[&str],
        rows: impl Iterator<Item = R>,
    ) -> anyhow::Result<()> {
        let path = self.out_dir.join(file);
        let mut writer = csv::Writer::from_path(&path)
            .with_context(|| format!("creating {}", path.display()))?;
        writer.write_record(header)?;
        let mut count = 0usize;
        for row in rows {
            writer.write_record(row.as_ref())?;
            count += 1;
        }
        writer.flush()?;
        self.artifacts.push(ArtifactRecord {
            name: name.to_string(),
            file: file.to_string(),
            rows: count,
        });
        Ok(())
    }

    pub fn record_timing(&mut self, task: &str, wall_ms: u128) {
        self.timings.push(TaskTiming { task: task.to_string(), wall_ms });
    }

    pub fn finish(self) -> anyhow::Result<ResultBundle> {
        let config_text = self.config.canonical_toml();
        let manifest = Manifest {
            experiment: self.config.kind.to_string(),
            config_hash: format!("{:016x}", fnv1a64(config_text.as_bytes())),
            master_seed: self.config.master_seed,
            software_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config_text,
            artifacts: self.artifacts,
            timings: self.timings,
        };
        let path = self.out_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(&path, json)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(ResultBundle { out_dir: self.out_dir, manifest })
    }
}

/// Fixed-format float for CSV cells: round-trippable shortest form.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}
