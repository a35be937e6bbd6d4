//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use nsf_harness::checks::{
    apriori_signs, bregman_equivalence, entropy_production_sign, equilibrium_fixed_point, matrix_outcomes,
    maximum_principle, positivity_and_mass, thermo_identities, Check,
};
use nsf_harness::config::{load_config, RunConfig};
use nsf_harness::experiments::{ballistic_ladder, convergence_ladders, weak_strong_ladder};
use nsf_harness::manufactured::CaseId;

fn default_config() -> RunConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    load_config(&path).expect("shipped config loads").0
}

fn failed(name: &str, e: anyhow::Error) -> Check {
    Check { name: name.into(), passed: false, detail: format!("error: {e:#}") }
}

fn ballistic(cfg: &RunConfig) -> Check {
    let name = "ballistic residual convergence";
    let r = match ballistic_ladder(cfg) {
        Ok(r) => r,
        Err(e) => return failed(name, e),
    };
    let defects: Vec<String> = r.levels.iter().map(|l| format!("{:.2e}", l.defect)).collect();
    let orders: Vec<String> = r.observed_orders.iter().map(|p| format!("{p:.2}")).collect();
    let ratio = r.levels.iter().zip(&r.tolerances).map(|(l, t)| l.corrupted_defect / t).fold(f64::INFINITY, f64::min);
    Check {
        name: name.into(),
        passed: r.within_tolerance() && r.tolerance_shrinks(1.8) && r.detector_fires(10.0),
        detail: format!(
            "defects [{}] within tol {}, tol ratios {:?} (>= 1.8, orders [{}] >= 0.85), corrupted/tol >= {ratio:.0} (> 10)",
            defects.join(", "),
            r.within_tolerance(),
            r.tolerance_ratios.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>(),
            orders.join(", ")
        ),
    }
}

fn weak_strong(cfg: &RunConfig) -> Check {
    let name = "weak-strong ladder";
    let r = match weak_strong_ladder(cfg, cfg.seed) {
        Ok(r) => r,
        Err(e) => return failed(name, e),
    };
    let floor_max = r.floor.iter().copied().fold(0.0, f64::max);
    let floors: Vec<String> = r.floor.iter().map(|f| format!("{f:.2e}")).collect();
    Check {
        name: name.into(),
        passed: r.slope >= 0.9 && floor_max <= 1e-6 && r.floor_decreases(),
        detail: format!(
            "slope {:.4} (>= 0.9), unperturbed floor [{}] over dt {:?} (<= 1e-6, decreasing {})",
            r.slope,
            floors.join(", "),
            r.floor_dt,
            r.floor_decreases()
        ),
    }
}

fn manufactured(cfg: &RunConfig) -> Check {
    let name = "manufactured convergence";
    let r = match convergence_ladders(cfg, cfg.convergence.case) {
        Ok(r) => r,
        Err(e) => return failed(name, e),
    };
    let mut detail = format!(
        "{}: dt order {} (>= 1), h order {} (>= 1.8)",
        r.case,
        r.dt.describe(),
        r.h.describe()
    );
    for other in CaseId::ALL.into_iter().filter(|c| *c != r.case) {
        if let Ok(o) = convergence_ladders(cfg, other) {
            detail.push_str(&format!("; {other}: dt {}, h {}", o.dt.describe(), o.h.describe()));
        }
    }
    Check { name: name.into(), passed: r.dt.meets(1.0) && r.h.meets(1.8), detail }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cfg = default_config();
    let outcomes = matrix_outcomes();
    let fixed = {
        let a = equilibrium_fixed_point();
        let b = positivity_and_mass(&outcomes);
        Check {
            name: "scheme fixed points".into(),
            passed: a.passed && b.passed,
            detail: format!("{}; {}", a.detail, b.detail),
        }
    };
    let criteria = [
        thermo_identities(cfg.seed),
        bregman_equivalence(cfg.seed),
        fixed,
        entropy_production_sign(&outcomes),
        ballistic(&cfg),
        weak_strong(&cfg),
        manufactured(&cfg),
        maximum_principle(cfg.seed),
        apriori_signs(&outcomes),
    ];
    println!();
    for c in &criteria {
        println!("{c}");
    }
    let failures = criteria.iter().filter(|c| !c.passed).count();
    println!("\n{} of {} acceptance criteria passed in {:.1?}", criteria.len() - failures, criteria.len(), start.elapsed());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
