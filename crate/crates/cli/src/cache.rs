//! On-disk memo of command payloads: one JSON file per canonical key.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Value};

const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

/// File name for a key: ASCII letters, digits, `-`, `.`, `=` kept, every
/// other byte written as `_XX`.
fn file_name(key: &str) -> String {
    let mut out = String::with_capacity(key.len() + 5);
    for b in key.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'=') {
            out.push(b as char);
        } else {
            out.push_str(&format!("_{b:02X}"));
        }
    }
    out.push_str(".json");
    out
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `<platform cache dir>/connexp`, if the platform has one.
    pub fn default_dir() -> Option<PathBuf> {
        dirs::cache_dir().map(|d| d.join("connexp"))
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(file_name(key))
    }

    /// The stored payload, or `None` when absent. Unreadable or mismatched
    /// entries are deleted.
    pub fn get(&self, key: &str) -> Option<Value> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).ok()?;
        let valid = serde_json::from_str::<Value>(&text).ok().and_then(|doc| {
            let ok = doc.get("version").and_then(Value::as_u64) == Some(FORMAT_VERSION)
                && doc.get("key").and_then(Value::as_str) == Some(key);
            ok.then(|| doc.get("payload").cloned()).flatten()
        });
        if valid.is_none() {
            let _ = fs::remove_file(&path);
        }
        valid
    }

    /// Writes through a temporary file in the same directory, then renames.
    pub fn put(&self, key: &str, payload: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let doc = json!({ "version": FORMAT_VERSION, "key": key, "payload": payload });
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&doc)?.as_bytes())?;
        tmp.flush()?;
        tmp.persist(self.path_for(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// `get`, or compute and store. Storage failures are ignored.
    pub fn get_or_compute<E>(&self, key: &str, compute: impl FnOnce() -> Result<Value, E>) -> Result<Value, E> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        let _ = self.put(key, &v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_injective_and_safe() {
        assert_eq!(file_name("series|ogem(D=3)|r=4"), "series_7Cogem_28D=3_29_7Cr=4.json");
        assert_ne!(file_name("a_2F"), file_name("a/"));
        assert!(!file_name("../x").contains('/'));
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert!(cache.get("k").is_none());
        cache.put("k", &json!({"a": "1"})).unwrap();
        assert_eq!(cache.get("k"), Some(json!({"a": "1"})));

        fs::write(cache.path_for("k"), "{ not json").unwrap();
        assert!(cache.get("k").is_none());
        assert!(!cache.path_for("k").exists());

        cache.put("other", &json!(1)).unwrap();
        fs::copy(cache.path_for("other"), cache.path_for("k")).unwrap();
        assert!(cache.get("k").is_none());

        let mut calls = 0;
        for _ in 0..2 {
            let v: Result<Value, ()> = cache.get_or_compute("c", || {
                calls += 1;
                Ok(json!([1, 2]))
            });
            assert_eq!(v.unwrap(), json!([1, 2]));
        }
        assert_eq!(calls, 1);
    }
}
