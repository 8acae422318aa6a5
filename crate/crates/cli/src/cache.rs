//! Write-once file cache of computed Betti tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gfsuper_core::BettiTable;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever a change could alter cached results.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+ce1");

pub const CACHE_ENV: &str = "GFSUPER_CACHE_DIR";

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    key: String,
    value: BettiTable,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The environment variable wins over `flag`; otherwise `~/.cache/gfsuper`.
    pub fn resolve(flag: Option<&Path>) -> Option<Cache> {
        if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
            return Some(Cache::new(dir));
        }
        if let Some(dir) = flag {
            return Some(Cache::new(dir));
        }
        std::env::var_os("HOME").map(|h| Cache::new(PathBuf::from(h).join(".cache").join("gfsuper")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Canonical key: the operation and its parameters, in order, plus the
    /// code version.
    pub fn key(operation: &str, params: &[(&str, String)]) -> String {
        let mut key = format!("{operation}|v={CODE_VERSION}");
        for (name, value) in params {
            key.push_str(&format!("|{name}={value}"));
        }
        key
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", hex::encode(Sha256::digest(key.as_bytes()))))
    }

    pub fn get(&self, key: &str) -> Option<BettiTable> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == key).then_some(entry.value)
    }

    /// Stores the value unless the key is already present. Entries are
    /// written to a temporary file and renamed into place.
    pub fn put(&self, key: &str, value: &BettiTable) -> std::io::Result<()> {
        let path = self.path(key);
        if path.exists() {
            return Ok(());
        }
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        let entry = Entry {
            key: key.to_string(),
            value: value.clone(),
        };
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        match tmp.persist_noclobber(&path) {
            Ok(_) => Ok(()),
            Err(e) if path.exists() => {
                drop(e);
                Ok(())
            }
            Err(e) => Err(e.error),
        }
    }

    pub fn get_or_compute<E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<BettiTable, E>,
    ) -> Result<BettiTable, E> {
        if let Some(hit) = self.get(key) {
            return Ok(hit);
        }
        let value = compute()?;
        // a failed write only costs a recomputation later
        let _ = self.put(key, &value);
        Ok(value)
    }
}
