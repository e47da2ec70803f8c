//! Rendering of command reports as JSON, CSV or plain text.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A finished command: machine-readable results plus the two flat renderings.
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub text: String,
    pub table: Table,
}

/// Header and rows for CSV output.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    /// Two-column `key,value` table.
    pub fn key_value<K: ToString, V: ToString>(pairs: impl IntoIterator<Item = (K, V)>) -> Self {
        let mut t = Table::new(["key", "value"]);
        for (k, v) in pairs {
            t.push([k.to_string(), v.to_string()]);
        }
        t
    }
}

impl Report {
    pub fn new(command: &'static str, params: impl Serialize, results: impl Serialize) -> Result<Self> {
        Ok(Report {
            command,
            params: serde_json::to_value(params)?,
            results: serde_json::to_value(results)?,
            text: String::new(),
            table: Table::new(Vec::<String>::new()),
        })
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": self.command,
                    "params": self.params,
                    "results": self.results,
                });
                let mut out = serde_json::to_vec_pretty(&doc)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.header)?;
                for row in &self.table.rows {
                    w.write_record(row)?;
                }
                Ok(w.into_inner().context("flushing CSV")?)
            }
            Format::Text => Ok(self.text.clone().into_bytes()),
        }
    }
}

/// Write to `out`, or to stdout when no path is given.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
