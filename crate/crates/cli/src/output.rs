//! Atomic artifact writes and the run manifest.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub struct Artifact {
    pub name: String,
    pub contents: Vec<u8>,
}

impl Artifact {
    pub fn text(name: &str, s: String) -> Self {
        Artifact {
            name: name.into(),
            contents: s.into_bytes(),
        }
    }

    pub fn json<T: Serialize>(name: &str, v: &T) -> Self {
        let mut s = serde_json::to_string_pretty(v).expect("serializable");
        s.push('\n');
        Artifact::text(name, s)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes to a temporary file in the target directory, then renames over the destination.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> std::io::Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ArtifactRecord {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub command: String,
    pub config: Value,
    pub config_sha256: String,
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub artifacts: Vec<ArtifactRecord>,
}
