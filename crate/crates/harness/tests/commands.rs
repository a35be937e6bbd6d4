use std::fs;
use std::path::Path;

use nsf_harness::commands::{cmd_convergence, cmd_verify, cmd_weakstrong, CommandOptions};
use nsf_harness::config::{load_config, RunConfig};
use nsf_harness::experiments::{convergence_ladders, least_squares_slope, perturbation_profile};
use nsf_harness::manufactured::CaseId;
use nsf_harness::output::SUMMARY_FILE;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn shipped() -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    load_config(&path).unwrap().0
}

fn quiet(dir: &Path) -> CommandOptions {
    CommandOptions { out: dir.to_path_buf(), quiet: true }
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(SUMMARY_FILE)).unwrap()).unwrap()
}

#[test]
fn steady_case_is_reproduced_exactly() {
    let mut cfg = shipped();
    cfg.convergence.dt_levels = vec![4e-3, 2e-3, 1e-3];
    cfg.convergence.h_levels = vec![32, 64, 128];
    cfg.convergence.dt_cells = 32;
    cfg.convergence.t_end = 0.02;
    let res = convergence_ladders(&cfg, CaseId::Steady).unwrap();
    assert!(res.dt.exact && res.h.exact, "{res:?}");
    assert_eq!(res.dt.describe(), "exact (residual at floor)");
    assert!(res.dt.errors.iter().all(|e| *e < 1e-10));
}

#[test]
fn heated_wall_space_ladder_is_second_order() {
    let mut cfg = shipped();
    cfg.convergence.h_levels = vec![32, 64, 128];
    cfg.convergence.dt_levels = vec![4e-3, 2e-3];
    cfg.convergence.dt_cells = 32;
    cfg.convergence.t_end = 0.05;
    let res = convergence_ladders(&cfg, CaseId::HeatedWall).unwrap();
    let p = res.h.observed_order().unwrap();
    assert!(p > 1.8, "h order {p}");
}

#[test]
fn convergence_command_writes_ladders() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = shipped();
    cfg.convergence.dt_levels = vec![4e-3, 2e-3, 1e-3];
    cfg.convergence.h_levels = vec![32, 64, 128];
    cfg.convergence.dt_cells = 32;
    cfg.convergence.t_end = 0.05;
    cfg.ballistic.cells = vec![32, 64, 128];
    cfg.ballistic.t_end = 0.05;
    let passed = cmd_convergence(&cfg, &[], &quiet(dir.path())).unwrap();
    let v = summary(dir.path());
    assert_eq!(v["command"], "convergence");
    assert_eq!(v["passed"], passed);
    assert_eq!(v["results"]["manufactured"]["case"], "heated-wall");
    assert_eq!(v["results"]["manufactured"]["h"]["differences"].as_array().unwrap().len(), 2);
    assert_eq!(v["results"]["ballistic"]["levels"].as_array().unwrap().len(), 3);
}

#[test]
fn weak_strong_energy_is_quadratic_in_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = shipped();
    cfg.weakstrong.cells = 32;
    cfg.weakstrong.dt = 2e-3;
    cfg.weakstrong.t_end = 0.04;
    cfg.weakstrong.floor_dt = vec![4e-3, 2e-3];
    assert!(cmd_weakstrong(&cfg, &[], &quiet(dir.path())).unwrap());
    let v = summary(dir.path());
    let slope = v["results"]["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
    let floor: Vec<f64> = v["results"]["floor"].as_array().unwrap().iter().map(|f| f.as_f64().unwrap()).collect();
    assert!(floor[1] < floor[0]);
}

#[test]
fn weak_strong_rejects_non_positive_amplitudes() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = shipped();
    cfg.weakstrong.amplitudes = vec![1e-2, 0.0];
    assert!(cmd_weakstrong(&cfg, &[], &quiet(dir.path())).is_err());
}

#[test]
fn verify_passes_on_shipped_config() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cmd_verify(&shipped(), &[], &quiet(dir.path())).unwrap());
    let v = summary(dir.path());
    let checks = v["results"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 5);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn slope_of_exact_power_law() {
    let x: Vec<f64> = [1e-1f64, 1e-2, 1e-3].iter().map(|a| a.ln()).collect();
    let y: Vec<f64> = x.iter().map(|l| 2.0 * l + 0.7).collect();
    assert!((least_squares_slope(&x, &y) - 2.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn perturbation_profile_is_normalized_and_clamped(seed in any::<u64>(), modes in 1usize..8, n in 8usize..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..=n).map(|i| 2.0 * i as f64 / n as f64).collect();
        let p = perturbation_profile(&mut rng, &x, 2.0, modes);
        prop_assert!(p[0].abs() < 1e-12);
        prop_assert!(p[n].abs() < 1e-12);
        let m = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbation_profile_depends_only_on_seed(seed in any::<u64>()) {
        let x: Vec<f64> = (0..=16).map(|i| i as f64 / 16.0).collect();
        let a = perturbation_profile(&mut ChaCha8Rng::seed_from_u64(seed), &x, 1.0, 4);
        let b = perturbation_profile(&mut ChaCha8Rng::seed_from_u64(seed), &x, 1.0, 4);
        prop_assert_eq!(a, b);
    }
}
