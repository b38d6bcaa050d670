use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::format::{fmt_f64, to_json_string};
use crate::verify::IdentityReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope<T> {
    pub tool_version: String,
    pub timestamp: String,
    pub config: serde_json::Value,
    pub payload: T,
    pub identity_reports: Vec<IdentityReport>,
}

impl<T: Serialize> ResultEnvelope<T> {
    pub fn new(
        config: serde_json::Value,
        payload: T,
        identity_reports: Vec<IdentityReport>,
    ) -> Self {
        ResultEnvelope {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            config,
            payload,
            identity_reports,
        }
    }
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    emit(&to_json_string(value)?, out)
}

/// A CSV cell: floats at full precision, everything else as displayed.
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub fn csv_string(header: &[&str], rows: &[Vec<Cell>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| crate::error::Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render)).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::error::Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `<dir>/<stem>_profile.csv` next to a result file.
pub fn profile_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "result".to_string());
    out.with_file_name(format!("{stem}_profile.csv"))
}
