//! On-disk result cache. Entries are keyed by the SHA-256 of the convention
//! version and the canonical request string, and published by rename.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use schubert_core::CONVENTION_VERSION;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    convention: String,
    request: String,
    value: String,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(request: &str) -> String {
        let mut h = Sha256::new();
        h.update(CONVENTION_VERSION.as_bytes());
        h.update([0u8]);
        h.update(request.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, request: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(request)))
    }

    /// The stored value, or `None` on a miss. Unreadable or mismatched
    /// entries count as misses.
    pub fn get(&self, request: &str) -> Option<String> {
        let bytes = fs::read(self.path(request)).ok()?;
        let entry: Entry = serde_json::from_slice(&bytes).ok()?;
        (entry.convention == CONVENTION_VERSION && entry.request == request).then_some(entry.value)
    }

    pub fn put(&self, request: &str, value: &str) -> io::Result<()> {
        let entry = Entry {
            convention: CONVENTION_VERSION.to_string(),
            request: request.to_string(),
            value: value.to_string(),
        };
        let bytes = serde_json::to_vec(&entry).map_err(io::Error::other)?;
        atomic_write(&self.path(request), &bytes)
    }
}

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers see either the old file or the complete new one.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert_eq!(cache.get("coeff 2,1 2,1 2,1"), None);
        cache.put("coeff 2,1 2,1 2,1", "\"t2 - y1\"").unwrap();
        assert_eq!(cache.get("coeff 2,1 2,1 2,1").as_deref(), Some("\"t2 - y1\""));
        assert_eq!(cache.get("coeff 2,1 2,1 1"), None);
    }

    #[test]
    fn corrupt_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        fs::write(cache.path("k"), b"{\"conv").unwrap();
        assert_eq!(cache.get("k"), None);
        cache.put("k", "v").unwrap();
        assert_eq!(cache.get("k").as_deref(), Some("v"));
    }

    #[test]
    fn concurrent_puts_leave_one_whole_value() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let values: Vec<String> = (0..8).map(|i| format!("{i}").repeat(100_000)).collect();
        std::thread::scope(|s| {
            for v in &values {
                let cache = cache.clone();
                s.spawn(move || cache.put("same", v).unwrap());
            }
        });
        let got = cache.get("same").unwrap();
        assert!(values.contains(&got));
    }

    #[test]
    fn keys_are_hex_digests() {
        let k = Cache::key("x");
        assert_eq!(k.len(), 64);
        assert_ne!(k, Cache::key("y"));
    }
}
