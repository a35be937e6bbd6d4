use std::fs;
use std::path::Path;

use nsf_core::diagnostics::{CSV_COLUMNS, CSV_SCHEMA_VERSION};
use nsf_harness::commands::{cmd_run, CommandOptions};
use nsf_harness::config::{load_config, Precision, RunConfig};
use nsf_harness::output::{format_value, SnapshotMeta, CSV_FILE, SNAPSHOT_DIR, SUMMARY_FILE};
use proptest::prelude::*;
use serde_json::Value;

fn small_config() -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    let (mut cfg, _) = load_config(&path).unwrap();
    cfg.scheme.t_end = 0.02;
    cfg.scheme.dt = 2e-3;
    cfg.output.snapshot_every = 5;
    cfg
}

fn run_into(cfg: &RunConfig, dir: &Path) {
    let opts = CommandOptions { out: dir.to_path_buf(), quiet: true };
    assert!(cmd_run(cfg, &[], &opts).unwrap());
}

#[test]
fn csv_has_the_declared_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config();
    run_into(&cfg, dir.path());
    let text = fs::read_to_string(dir.path().join(CSV_FILE)).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, CSV_COLUMNS);
    let rows: Vec<&str> = lines.collect();
    // initial state plus ten steps
    assert_eq!(rows.len(), 11);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), CSV_COLUMNS.len());
        for f in fields {
            f.parse::<f64>().unwrap_or_else(|_| panic!("unparsable field {f}"));
        }
    }
}

#[test]
fn runs_are_bit_reproducible() {
    let cfg = small_config();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_into(&cfg, a.path());
    run_into(&cfg, b.path());
    assert_eq!(fs::read(a.path().join(CSV_FILE)).unwrap(), fs::read(b.path().join(CSV_FILE)).unwrap());
    let snap = |d: &Path| fs::read(d.join(SNAPSHOT_DIR).join("state_00010.bin")).unwrap();
    assert_eq!(snap(a.path()), snap(b.path()));
}

#[test]
fn summary_records_config_and_final_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config();
    run_into(&cfg, dir.path());
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap()).unwrap();
    for key in ["schema_version", "csv_schema_version", "command", "passed", "seed", "config", "warnings", "final_diagnostics", "results"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["csv_schema_version"], CSV_SCHEMA_VERSION);
    assert_eq!(v["command"], "run");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["config"]["grid"]["cells"], 64);
    let t = v["final_diagnostics"]["t"].as_f64().unwrap();
    assert!((t - 0.02).abs() < 1e-12);
    // the summary's config parses back to the same run
    let back: RunConfig = serde_json::from_value(v["config"].clone()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn snapshots_are_raw_little_endian_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config();
    run_into(&cfg, dir.path());
    let snaps = dir.path().join(SNAPSHOT_DIR);
    let mut names: Vec<String> = fs::read_dir(&snaps).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    // rows 0, 5, 10 plus the final state at index 11
    assert_eq!(names.len(), 8, "{names:?}");
    let bin = fs::read(snaps.join("state_00000.bin")).unwrap();
    assert_eq!(bin.len(), 3 * 65 * 8);
    let meta: SnapshotMeta = serde_json::from_str(&fs::read_to_string(snaps.join("state_00000.json")).unwrap()).unwrap();
    assert_eq!(meta.shape, [3, 65]);
    assert_eq!(meta.dtype, "float64");
    assert_eq!(meta.byte_order, "little");
    assert_eq!(meta.t, 0.0);
    // left wall density is the first value
    let rho0 = f64::from_le_bytes(bin[..8].try_into().unwrap());
    assert_eq!(rho0, 1.0);
    let theta_end = f64::from_le_bytes(bin[(2 * 65 - 1) * 8..2 * 65 * 8].try_into().unwrap());
    assert_eq!(theta_end, 1.5);
}

#[test]
fn single_precision_run_writes_four_byte_values() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config();
    cfg.precision = Precision::F32;
    cfg.scheme.newton_tol = 1e-5;
    run_into(&cfg, dir.path());
    let snaps = dir.path().join(SNAPSHOT_DIR);
    assert_eq!(fs::read(snaps.join("state_00000.bin")).unwrap().len(), 3 * 65 * 4);
    let meta: SnapshotMeta = serde_json::from_str(&fs::read_to_string(snaps.join("state_00000.json")).unwrap()).unwrap();
    assert_eq!(meta.dtype, "float32");
}

#[test]
fn format_value_uses_exponent_outside_range() {
    assert_eq!(format_value(0.0), "0");
    assert_eq!(format_value(1.5), "1.5");
    assert_eq!(format_value(1e-7), "1e-7");
    assert_eq!(format_value(-2.5e20), "-2.5e20");
    assert_eq!(format_value(f64::NAN), "NaN");
}

proptest! {
    #[test]
    fn format_value_round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let back: f64 = format_value(v).parse().unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
    }
}
