//! Atomic writes of JSON and CSV artifacts, each carrying the resolved config
//! and the toolkit version.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes to `path` through a temporary file in the same directory, or to stdout.
pub fn write_atomic(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(p).map_err(|e| CliError::Io(e.error))?;
        }
    }
    Ok(())
}

pub fn json_document(command: &str, config: &Value, result: impl Serialize) -> Result<Vec<u8>, CliError> {
    let doc = json!({
        "toolkit": "landau",
        "version": VERSION,
        "command": command,
        "config": config,
        "result": serde_json::to_value(result).map_err(|e| CliError::Config(e.to_string()))?,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// CSV table preceded by '#' lines holding the version, config and any extra JSON.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    extra: Vec<(String, Value)>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), extra: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn annotate(&mut self, key: &str, v: Value) {
        self.extra.push((key.to_string(), v));
    }

    pub fn render(&self, command: &str, config: &Value) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        writeln!(out, "# landau {VERSION}")?;
        writeln!(out, "# command: {command}")?;
        writeln!(out, "# config: {config}")?;
        for (k, v) in &self.extra {
            writeln!(out, "# {k}: {v}")?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.header).map_err(csv_err)?;
            for r in &self.rows {
                w.write_record(r).map_err(csv_err)?;
            }
            w.flush()?;
        }
        Ok(out)
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}
