//! Rendering to JSON or CSV and atomic writes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::CliError;

pub struct Report {
    pub json: String,
    pub csv: String,
    /// Identity checks that failed; the report is still written.
    pub failures: Vec<String>,
}

impl Report {
    /// `json` is the whole report; `rows` are its flat CSV records.
    pub fn table<J: Serialize + ?Sized, R: Serialize>(json: &J, rows: &[R]) -> Result<Report, CliError> {
        let mut json = serde_json::to_string_pretty(json).map_err(|e| CliError::Io(e.to_string()))?;
        json.push('\n');
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let csv = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
            .map_err(|e| CliError::Io(e.to_string()))?;
        Ok(Report { json, csv, failures: Vec::new() })
    }

    pub fn render(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Csv => &self.csv,
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, data: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(data.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
    tmp.persist(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
