//! Distance-table cache: full matrices keyed by scenario digest, stored
//! under a cache directory (--cache-dir, then CLI_CACHE_DIR, then the
//! user's cache directory). Entries carry a checksum; corrupt or mismatched
//! entries are silently rebuilt. Writes go through a temp file and a
//! rename.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use fdc_core::metric::Space;

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    digest: String,
    n: usize,
    checksum: String,
    rows: Vec<Vec<u32>>,
}

fn rows_checksum(rows: &[Vec<u32>]) -> String {
    let mut hasher = Sha256::new();
    for row in rows {
        for &d in row {
            hasher.update(d.to_le_bytes());
        }
        hasher.update(b";");
    }
    {
        let mut hex = String::with_capacity(71);
        hex.push_str("sha256:");
        for byte in hasher.finalize() {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

/// Resolves the cache directory: flag, then CLI_CACHE_DIR, then
/// $XDG_CACHE_HOME/fdc or ~/.cache/fdc.
pub fn resolve_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    if let Some(dir) = flag {
        return Some(dir);
    }
    if let Some(dir) = std::env::var_os("CLI_CACHE_DIR") {
        return Some(PathBuf::from(dir));
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(dir).join("fdc"));
    }
    std::env::var_os("HOME").map(|home| PathBuf::from(home).join(".cache").join("fdc"))
}

fn entry_path(dir: &Path, digest: &str) -> PathBuf {
    let tail = digest.rsplit(':').next().unwrap_or(digest);
    dir.join(format!("{tail}.dist.json"))
}

fn try_load(path: &Path, digest: &str, n: usize) -> Option<Vec<Vec<u32>>> {
    let bytes = std::fs::read(path).ok()?;
    let entry: CacheEntry = serde_json::from_slice(&bytes).ok()?;
    if entry.digest != digest || entry.n != n || entry.rows.len() != n {
        return None;
    }
    if entry.rows.iter().any(|r| r.len() != n) {
        return None;
    }
    if rows_checksum(&entry.rows) != entry.checksum {
        return None;
    }
    Some(entry.rows)
}

fn store(path: &Path, digest: &str, rows: &[Vec<u32>]) {
    let entry = CacheEntry {
        digest: digest.to_string(),
        n: rows.len(),
        checksum: rows_checksum(rows),
        rows: rows.to_vec(),
    };
    let Ok(bytes) = serde_json::to_vec(&entry) else { return };
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    let tmp = path.with_extension("tmp");
    if std::fs::write(&tmp, bytes).is_ok() {
        let _ = std::fs::rename(&tmp, path);
    }
}

/// Fills the space's distance rows from the cache when a valid entry
/// exists, computing and storing them otherwise. Cache failures are
/// treated as misses.
pub fn prime_space(space: &Space, dir: Option<&Path>, digest: &str) {
    let Some(dir) = dir else { return };
    let n = space.len();
    let path = entry_path(dir, digest);
    if let Some(rows) = try_load(&path, digest, n) {
        for (i, row) in rows.into_iter().enumerate() {
            space.prime_row(i, row);
        }
        return;
    }
    let rows: Vec<Vec<u32>> = (0..n).map(|i| space.row(i).to_vec()).collect();
    store(&path, digest, &rows);
}

#[cfg(test)]
mod tests {
    use super::*;
    use fdc_core::metric::FiniteMetricSpace;

    fn space() -> Space {
        let labels = (0..6).map(|v| v.to_string()).collect();
        FiniteMetricSpace::from_fn(labels, |i, j| (i as i64 - j as i64).unsigned_abs() as u32)
    }

    #[test]
    fn round_trips_and_detects_corruption() {
        let dir = std::env::temp_dir().join(format!("fdc-cache-test-{}", std::process::id()));
        let s1 = space();
        prime_space(&s1, Some(&dir), "sha256:abc");
        let path = entry_path(&dir, "sha256:abc");
        assert!(path.exists());

        // second run loads the cache
        let s2 = space();
        prime_space(&s2, Some(&dir), "sha256:abc");
        assert_eq!(s2.materialized_rows().len(), 6);
        assert_eq!(s2.dist(0, 5), 5);

        // corrupt the entry; priming silently rebuilds it
        std::fs::write(&path, b"{ not json").unwrap();
        let s3 = space();
        prime_space(&s3, Some(&dir), "sha256:abc");
        assert_eq!(s3.dist(1, 4), 3);
        let rebuilt: CacheEntry =
            serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
        assert_eq!(rebuilt.n, 6);
        let _ = std::fs::remove_dir_all(&dir);
    }
}
