//! Run manifests: what was run, on which inputs, with which seeds.

use std::collections::BTreeMap;
use std::hash::Hasher;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use fnv::FnvHasher;
use serde::Serialize;
use serde_json::Value;

/// 64-bit FNV-1a digest of a byte string, as 16 hex digits.
pub fn digest(bytes: &[u8]) -> String {
    let mut h = FnvHasher::default();
    h.write(bytes);
    format!("{:016x}", h.finish())
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub fnv1a64: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub options: BTreeMap<String, Value>,
    pub inputs: Vec<InputDigest>,
    pub seeds: Vec<u64>,
    pub version: String,
    pub duration_secs: f64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            options: BTreeMap::new(),
            inputs: Vec::new(),
            seeds: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_secs: 0.0,
        }
    }

    pub fn option(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.options.insert(key.to_string(), v);
    }

    /// Records the digest of `bytes` read from `path`.
    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            fnv1a64: digest(bytes),
            bytes: bytes.len(),
        });
    }

    pub fn finish(&mut self, elapsed: Duration) {
        self.duration_secs = elapsed.as_secs_f64();
    }

    /// One `key=value` per line, for text and CSV reports.
    pub fn lines(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("command".to_string(), self.command.clone()),
            ("version".to_string(), self.version.clone()),
        ];
        for (k, v) in &self.options {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push((format!("option.{k}"), text));
        }
        for i in &self.inputs {
            out.push((format!("input.{}", i.path), format!("fnv1a64:{} ({} bytes)", i.fnv1a64, i.bytes)));
        }
        for (k, s) in self.seeds.iter().enumerate() {
            out.push((format!("seed.{k}"), s.to_string()));
        }
        out.push(("duration_secs".to_string(), format!("{:.3}", self.duration_secs)));
        out
    }
}

/// Reads a file and records its digest.
pub fn read_input(manifest: &mut RunManifest, path: &Path) -> Result<Vec<u8>> {
    let bytes = std::fs::read(path).with_context(|| format!("failed to read {}", path.display()))?;
    manifest.input(path, &bytes);
    Ok(bytes)
}
