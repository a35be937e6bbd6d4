use std::path::PathBuf;

use nsf_harness::config::{load_config, parse_config, ConfigError, Precision, RunConfig};
use nsf_harness::manufactured::CaseId;

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

#[test]
fn shipped_configs_are_valid_without_warnings() {
    for name in ["default.toml", "manufactured.toml"] {
        let (cfg, warnings) = load_config(&shipped(name)).unwrap();
        assert!(warnings.is_empty(), "{name}: {warnings:?}");
        cfg.build::<f64>().unwrap();
    }
}

#[test]
fn default_file_matches_lambda_one_beta_seven() {
    let (cfg, _) = load_config(&shipped("default.toml")).unwrap();
    assert_eq!(cfg.transport.lambda, 1.0);
    assert_eq!(cfg.transport.beta, 7.0);
    assert_eq!(cfg.precision, Precision::F64);
}

#[test]
fn weak_conductivity_with_varying_wall_temperature_warns() {
    let text = r#"
        [transport]
        beta = 5.0
        [boundary]
        theta_left = [1.0, 0.5]
    "#;
    let (_, warnings) = parse_config(text).unwrap();
    assert_eq!(warnings.len(), 1);
    assert!(warnings[0].contains("beta > 6"), "{warnings:?}");
}

#[test]
fn weak_conductivity_with_constant_wall_temperature_is_quiet() {
    let (_, warnings) = parse_config("[transport]\nbeta = 5.0\n").unwrap();
    assert!(warnings.is_empty());
}

#[test]
fn square_pressure_law_is_rejected_naming_the_deficit_bound() {
    let err = parse_config("[eos]\nlaw = \"quadratic\"\n").unwrap_err();
    match err {
        ConfigError::Hypotheses(v) => {
            assert!(v.iter().any(|m| m.contains("pressure-deficit-bound") && m.contains("(5/3)P(Z)")), "{v:?}");
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn parse_errors_are_reported() {
    assert!(matches!(parse_config("[grid]\ncels = 4\n"), Err(ConfigError::Parse(_))));
    assert!(matches!(parse_config("[manufactured]\ncase = \"vortex\"\n"), Err(ConfigError::Parse(_))));
    assert!(matches!(load_config(&shipped("missing.toml")), Err(ConfigError::Io { .. })));
}

#[test]
fn manufactured_runs_need_the_unit_slab() {
    let err = parse_config("[grid]\nlength = 2.0\n[manufactured]\ncase = \"bump\"\n").unwrap_err();
    assert!(matches!(err, ConfigError::Invalid(_)));
}

#[test]
fn manufactured_config_switches_to_verification_mode() {
    let (cfg, _) = parse_config("[manufactured]\ncase = \"bump\"\n[transport]\nbeta = 7.0\n").unwrap();
    assert_eq!(cfg.manufactured.as_ref().unwrap().case, CaseId::Bump);
    let (scheme, case) = cfg.build::<f64>().unwrap();
    assert!(case.is_some());
    assert_eq!(scheme.params.mode, nsf_core::scheme::RunMode::Verification);
}

#[test]
fn initial_profile_interpolates_walls_without_base() {
    let (cfg, _) = parse_config(
        "[boundary]\nrho_left = [1.0]\nrho_right = [2.0]\n[initial]\nrho_bump = 0.5\ntheta_base = 3.0\n",
    )
    .unwrap();
    let (scheme, _) = cfg.build::<f64>().unwrap();
    let [rho, theta, _] = cfg.initial_fields(&scheme, None);
    let mid = rho.len() / 2;
    assert!((rho[mid] - 2.0).abs() < 1e-12);
    assert_eq!(rho[0], 1.0);
    assert!((theta[mid] - 3.0).abs() < 1e-12);
}

#[test]
fn empty_text_gives_defaults() {
    let (cfg, _) = parse_config("").unwrap();
    assert_eq!(cfg, RunConfig::default());
    assert_eq!(cfg.seed, 7);
}
