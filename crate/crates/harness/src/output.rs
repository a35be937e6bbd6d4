//! Diagnostics CSV, binary state snapshots with JSON sidecars, and the run
//! summary.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use nsf_core::diagnostics::{DiagnosticsReport, CSV_COLUMNS, CSV_SCHEMA_VERSION};
use nsf_core::discretization::{FieldState, Grid1D};
use nsf_core::Real;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Precision, RunConfig};

pub const CSV_FILE: &str = "diagnostics.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const SNAPSHOT_DIR: &str = "snapshots";
pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

/// Comma separated header line.
pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

/// Shortest representation that round-trips, in exponent form outside
/// `[1e-4, 1e15)`.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn csv_row(report: &DiagnosticsReport) -> String {
    report.csv_values().iter().map(|v| format_value(*v)).collect::<Vec<_>>().join(",")
}

pub struct CsvWriter {
    out: BufWriter<File>,
}

impl CsvWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{}", csv_header())?;
        Ok(Self { out })
    }

    pub fn write(&mut self, report: &DiagnosticsReport) -> Result<()> {
        writeln!(self.out, "{}", csv_row(report))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Little-endian concatenation of `rho`, `theta`, `u` in the declared precision.
pub fn encode_state<T: Real>(state: &FieldState<T>, precision: Precision) -> Vec<u8> {
    let fields = [&state.rho, &state.theta, &state.u];
    let n: usize = fields.iter().map(|f| f.len()).sum();
    let mut bytes = Vec::with_capacity(n * 8);
    for f in fields {
        for v in f.iter() {
            match precision {
                Precision::F64 => bytes.extend_from_slice(&v.as_f64().to_le_bytes()),
                Precision::F32 => bytes.extend_from_slice(&(v.as_f64() as f32).to_le_bytes()),
            }
        }
    }
    bytes
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SnapshotMeta {
    pub shape: [usize; 2],
    pub fields: [String; 3],
    pub dtype: String,
    pub byte_order: String,
    pub t: f64,
    pub cells: usize,
    pub length: f64,
    pub h: f64,
}

/// Writes `state_NNNNN.bin` and `state_NNNNN.json` into `dir`.
pub fn write_snapshot<T: Real>(
    dir: &Path,
    index: usize,
    state: &FieldState<T>,
    grid: &Grid1D<T>,
    precision: Precision,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let stem = format!("state_{index:05}");
    let bin = dir.join(format!("{stem}.bin"));
    fs::write(&bin, encode_state(state, precision))?;
    let meta = SnapshotMeta {
        shape: [3, grid.n_nodes()],
        fields: ["rho".into(), "theta".into(), "u".into()],
        dtype: precision.dtype().into(),
        byte_order: "little".into(),
        t: state.t.as_f64(),
        cells: grid.n_cells(),
        length: grid.length().as_f64(),
        h: grid.h().as_f64(),
    };
    fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&meta)?)?;
    Ok(bin)
}

/// Named diagnostics of a report, NaN mapped to null.
pub fn report_json(report: &DiagnosticsReport) -> Value {
    let map: serde_json::Map<String, Value> = CSV_COLUMNS
        .iter()
        .zip(report.csv_values())
        .map(|(k, v)| (k.to_string(), serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)))
        .collect();
    Value::Object(map)
}

pub fn write_summary(
    dir: &Path,
    command: &str,
    config: &RunConfig,
    warnings: &[String],
    passed: bool,
    final_diagnostics: Option<Value>,
    results: Value,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let summary = json!({
        "schema_version": SUMMARY_SCHEMA_VERSION,
        "csv_schema_version": CSV_SCHEMA_VERSION,
        "command": command,
        "passed": passed,
        "seed": config.seed,
        "config": config,
        "warnings": warnings,
        "final_diagnostics": final_diagnostics,
        "results": results,
    });
    let path = dir.join(SUMMARY_FILE);
    fs::write(&path, serde_json::to_string_pretty(&summary)?)?;
    Ok(path)
}
