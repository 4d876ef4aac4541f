use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// Provenance of one run: enough to repeat it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub parameters: BTreeMap<String, String>,
    pub seeds: Vec<u64>,
    pub budgets: BTreeMap<String, u64>,
    pub version: String,
    pub wall_clock_seconds: f64,
    pub result: String,
}

pub struct ManifestBuilder {
    started: Instant,
    manifest: RunManifest,
}

impl ManifestBuilder {
    pub fn new() -> Self {
        Self {
            started: Instant::now(),
            manifest: RunManifest {
                command: std::env::args().collect(),
                parameters: BTreeMap::new(),
                seeds: Vec::new(),
                budgets: BTreeMap::new(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                wall_clock_seconds: 0.0,
                result: String::new(),
            },
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.manifest.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.manifest.seeds.push(seed);
        self
    }

    pub fn budget(&mut self, key: &str, value: u64) -> &mut Self {
        self.manifest.budgets.insert(key.to_string(), value);
        self
    }

    pub fn finish(&self, result: impl Into<String>) -> RunManifest {
        let mut m = self.manifest.clone();
        m.wall_clock_seconds = self.started.elapsed().as_secs_f64();
        m.result = result.into();
        m
    }
}

/// Name of the manifest file belonging to artifact `file_name`.
pub fn manifest_name(file_name: &str) -> String {
    let stem = file_name.split('.').next().unwrap_or(file_name);
    format!("{stem}.manifest.json")
}

/// Writes `contents` to `dir/file_name` and the manifest next to it, each
/// through a temporary file renamed into place.
pub fn write_artifact(dir: &Path, file_name: &str, contents: &str, manifest: &RunManifest) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let manifest_text = serde_json::to_string_pretty(manifest)? + "\n";
    write_atomic(&dir.join(manifest_name(file_name)), &manifest_text)?;
    let path = dir.join(file_name);
    write_atomic(&path, contents)?;
    Ok(path)
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
