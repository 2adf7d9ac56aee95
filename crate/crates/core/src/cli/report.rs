//! Run manifests and report files.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// Identifies a run well enough to repeat it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Every flag after defaults were applied.
    pub flags: Value,
    pub seed: u64,
    pub version: String,
    /// RFC 3339, UTC. The only field that differs between repeated runs.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, flags: Value, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            flags,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        }
    }
}

/// `{"manifest": .., "result": ..}`.
#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub manifest: &'a RunManifest,
    pub result: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)
}

/// Appends one row, writing `header` first if the file is new or empty.
pub fn append_csv_row(path: &Path, header: &[&str], row: &[String]) -> std::io::Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{}", header.join(","))?;
    }
    writeln!(f, "{}", row.join(","))
}
