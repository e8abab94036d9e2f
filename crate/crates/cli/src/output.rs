//! Output plumbing: the JSON run report, CSV writers, and exit-code
//! carrying errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// Error carrying the process exit code: 2 usage/validation, 3 I/O.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: 3,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<chainsynth::Error> for CliError {
    fn from(e: chainsynth::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

/// The documented JSON run report (docs/report.schema.json).
#[derive(Debug, Serialize)]
pub struct Report {
    pub strategy: String,
    pub steps: u64,
    pub seed: u64,
    pub noncr_fraction: f64,
    pub stderr: f64,
    #[serde(rename = "chsh_S")]
    pub chsh_s: Option<f64>,
    pub makespan_s: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Fixed 9-decimal rendering used for all printed numbers.
pub fn fmt9(x: f64) -> String {
    format!("{x:.9}")
}

/// Writes the payload to `out` when given (exit 3 on failure), otherwise to
/// stdout.
pub fn write_payload(out: Option<&PathBuf>, payload: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, payload).map_err(|e| CliError::io(path, e))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            std::io::stdout()
                .write_all(payload)
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

/// Serializes rows into RFC-4180 CSV with a header.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("csv header");
    for row in rows {
        writer.write_record(row).expect("csv row");
    }
    writer.into_inner().expect("csv buffer")
}
