//! Run manifests: enough resolved detail to re-run any command and compare
//! artifact checksums. One manifest per invocation; artifact files stay
//! byte-reproducible while the manifest records measured wall-clock time.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliResult;

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRef {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Original command-line arguments (program name excluded); replaying
    /// them reproduces every artifact checksum below.
    pub argv: Vec<String>,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub inputs: Vec<ArtifactRef>,
    pub outputs: Vec<ArtifactRef>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        Self {
            tool: "spinbench".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            argv: std::env::args().skip(1).collect(),
            parameters: BTreeMap::new(),
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input(&mut self, path: &Path) -> CliResult<&mut Self> {
        let artifact = artifact_ref(path)?;
        self.inputs.push(artifact);
        Ok(self)
    }

    pub fn output(&mut self, path: &Path) -> CliResult<&mut Self> {
        let artifact = artifact_ref(path)?;
        self.outputs.push(artifact);
        Ok(self)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| crate::CliError::validation(format!("manifest encoding: {e}")))?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }
}

pub fn artifact_ref(path: &Path) -> CliResult<ArtifactRef> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(ArtifactRef {
        path: path.display().to_string(),
        sha256,
    })
}

/// Manifest path for a single-file output: `<file>.manifest.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}
