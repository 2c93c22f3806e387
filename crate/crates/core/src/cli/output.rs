//! Artifact writers. Every artifact embeds the schema version and the resolved config.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip an f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with frozen columns.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Comment header with schema and config, then the column line and rows.
    pub fn render(&self, command: &str, config: &Value) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema_version: {SCHEMA_VERSION}");
        let _ = writeln!(out, "# command: {command}");
        let _ = writeln!(out, "# config: {config}");
        let _ = writeln!(out, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

/// Wraps a result in the common JSON envelope.
pub fn envelope<T: Serialize>(command: &str, status: &str, config: &Value, result: &T) -> Result<String> {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": status,
        "config": config,
        "result": result,
    });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}
