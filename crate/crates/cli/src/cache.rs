//! Content-addressed on-disk cache of mutated seed documents.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENGINE_VERSION: &str = concat!("qcluster-", env!("CARGO_PKG_VERSION"));

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `$QCA_CACHE_DIR`, else `$XDG_CACHE_HOME/qca`, else `~/.cache/qca`.
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os("QCA_CACHE_DIR")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("qca")))
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("qca")))?;
        Some(Self { dir })
    }

    /// Hex SHA-256 of the canonical (sorted-key, compact) JSON of `input`,
    /// the 1-based sequence and the engine version.
    pub fn key(input: &Value, sequence: &[usize]) -> String {
        let canonical = serde_json::json!({
            "engine": ENGINE_VERSION,
            "input": input,
            "sequence": sequence,
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    pub fn put(&self, key: &str, contents: &str) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating cache directory {}", self.dir.display()))?;
        write_atomic(&self.path(key), contents)
    }
}

/// Writes via a temporary file in the target directory and an atomic rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent)
        .with_context(|| format!("creating a temporary file in {}", parent.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
