//! On-disk cache of payloads keyed by the SHA-256 of the canonical request.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Bumped whenever payload formats or algorithms change.
pub const CACHE_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Normal,
    /// Recompute even on a hit and fail if the stored payload differs.
    Verify,
}

pub fn key(request: &Value) -> String {
    hex::encode(Sha256::digest(request.to_string().as_bytes()))
}

pub fn entry_path(dir: &Path, request: &Value) -> PathBuf {
    dir.join(format!("{}.json", key(request)))
}

enum Lookup {
    Hit(Value),
    Miss,
    /// Present but unreadable, of another version, or for another request.
    Stale(String),
}

fn lookup(path: &Path, request: &Value) -> Lookup {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(_) => return Lookup::Miss,
    };
    let entry: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return Lookup::Stale(format!("unparseable entry: {e}")),
    };
    if entry["version"] != json!(CACHE_VERSION) {
        return Lookup::Stale(format!("version {} != {CACHE_VERSION}", entry["version"]));
    }
    if &entry["request"] != request {
        return Lookup::Stale("entry belongs to a different request".into());
    }
    match entry.get("payload") {
        Some(p) => Lookup::Hit(p.clone()),
        None => Lookup::Stale("entry has no payload".into()),
    }
}

/// Writes to a temporary file in the same directory, then renames it into place.
fn store(dir: &Path, request: &Value, payload: &Value) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let path = entry_path(dir, request);
    let tmp = dir.join(format!(".{}.{}.tmp", key(request), std::process::id()));
    let entry = json!({ "version": CACHE_VERSION, "request": request, "payload": payload });
    fs::write(&tmp, entry.to_string())?;
    fs::rename(&tmp, &path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Returns the cached payload for `request`, or computes and stores it.
/// Without a directory nothing is cached; write failures only warn.
pub fn get_or_compute(
    dir: Option<&Path>,
    mode: Mode,
    request: &Value,
    compute: impl FnOnce() -> Result<Value, String>,
) -> Result<Value, String> {
    let Some(dir) = dir else {
        return compute();
    };
    let path = entry_path(dir, request);
    let cached = lookup(&path, request);
    match (&cached, mode) {
        (Lookup::Hit(p), Mode::Normal) => return Ok(p.clone()),
        (Lookup::Stale(why), Mode::Verify) => {
            return Err(format!("cache entry {} failed verification: {why}", path.display()));
        }
        (Lookup::Stale(why), Mode::Normal) => eprintln!("warning: ignoring cache entry {}: {why}", path.display()),
        _ => {}
    }
    let payload = compute()?;
    if let (Lookup::Hit(p), Mode::Verify) = (&cached, mode) {
        if *p != payload {
            return Err(format!("cache entry {} disagrees with recomputation", path.display()));
        }
        return Ok(payload);
    }
    if let Err(e) = store(dir, request, &payload) {
        eprintln!("warning: could not write cache directory {}: {e}; continuing uncached", dir.display());
    }
    Ok(payload)
}
