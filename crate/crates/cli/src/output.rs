//! Tables, artifact files and the run manifest.
//!
//! Floats go to files as the shortest decimal string that parses back to the same `f64`;
//! terminal tables show six significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn exact(&self) -> String {
        match self {
            Cell::Num(v) if v.is_nan() => "nan".into(),
            Cell::Num(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Num(v) => sig6(*v),
            other => other.exact(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // JSON has no infinities
            Cell::Num(v) if !v.is_finite() => Value::String(self.exact()),
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return Cell::Num(v).exact();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag).max(0) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A named table with fixed column order.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self::with_columns(name, columns.iter().map(|c| c.to_string()).collect())
    }

    pub fn with_columns(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::human).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([self.columns[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: Vec<&str>| {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, self.columns.iter().map(String::as_str).collect());
        for r in &cells {
            line(&mut out, r.iter().map(String::as_str).collect());
        }
        out
    }
}

/// Provenance stamped into every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Stamp {
    pub command: String,
    pub config_hash: String,
    pub seed: Option<u64>,
}

fn serialise(table: &Table, stamp: &Stamp, format: Format) -> String {
    match format {
        Format::Csv => {
            let seed = stamp.seed.map_or("none".to_string(), |s| s.to_string());
            let mut out = format!(
                "# levylab {} config_hash={} seed={}\n",
                stamp.command, stamp.config_hash, seed
            );
            let _ = writeln!(out, "{}", table.columns.join(","));
            for r in &table.rows {
                let fields: Vec<String> = r.iter().map(|c| csv_field(&c.exact())).collect();
                let _ = writeln!(out, "{}", fields.join(","));
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                .collect();
            let doc = json!({
                "command": stamp.command,
                "config_hash": stamp.config_hash,
                "seed": stamp.seed,
                "table": table.name,
                "columns": table.columns,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json value");
            s.push('\n');
            s
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRecord {
    pub file: String,
    pub sha256: String,
}

/// Serialised writer for one run's output directory.
pub struct Sink {
    dir: PathBuf,
    format: Format,
    stamp: Stamp,
    pub artifacts: Vec<ArtifactRecord>,
}

impl Sink {
    pub fn new(dir: &Path, format: Format, stamp: Stamp) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            stamp,
            artifacts: Vec::new(),
        })
    }

    fn write_bytes(&mut self, file: String, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(&file);
        std::fs::write(&path, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.artifacts.push(ArtifactRecord {
            file,
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn table(&mut self, table: &Table) -> Result<(), CliError> {
        let ext = match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let body = serialise(table, &self.stamp, self.format);
        self.write_bytes(format!("{}.{ext}", table.name), body.as_bytes())
    }

    /// Writes `manifest.json` listing every artifact written so far.
    pub fn finish(mut self, config: &Value, extra: Value) -> Result<PathBuf, CliError> {
        let manifest = json!({
            "tool": "levylab",
            "versions": { "levylab-cli": env!("CARGO_PKG_VERSION"), "levylab-core": levylab::VERSION },
            "command": self.stamp.command,
            "config_hash": self.stamp.config_hash,
            "seed": self.stamp.seed,
            "format": self.format,
            "config": config,
            "artifacts": self.artifacts,
            "result": extra,
        });
        let mut body = serde_json::to_string_pretty(&manifest).expect("json value");
        body.push('\n');
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, body.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.artifacts.clear();
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(0.80519123), "0.805191");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(-2.5e-7), "-2.50000e-7");
        assert_eq!(sig6(0.0), "0.0");
    }

    #[test]
    fn exact_floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 6.02214076e23] {
            let s = Cell::Num(v).exact();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(Cell::Num(f64::INFINITY).exact(), "inf");
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
