//! Invariant checks shared by the `verify` command and the acceptance suite.

use std::fmt;
use std::sync::Arc;

use nsf_core::diagnostics::{harmonic_extension, Evaluator, HarmonicExtension, TemperatureExtension};
use nsf_core::discretization::{gradient, laplacian, BoundaryData, Closure, Grid1D, Trace};
use nsf_core::scheme::{NoForcing, Scheme, SchemeParams};
use nsf_core::thermo::validate::{validate_model, Hypothesis};
use nsf_core::thermo::{
    bregman_decomposition, gibbs_residuals, relative_energy, to_conservative, EquationOfState, Model, PressureLaw,
    QuadraticPressure, ThermoPoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{LawSpec, RunConfig, SmoothingSpec};
use crate::experiments::run_config;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.into(), passed, detail }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<34} {}", self.name, self.detail)
    }
}

/// Log-uniform sample in `[lo, hi]`.
fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Equation of state exercised by the thermodynamic checks.
fn test_eos() -> EquationOfState<f64> {
    EquationOfState::default().with_radiation(0.5)
}

/// Gibbs residuals at random points under step refinement, stability signs,
/// and the hypothesis validators on the default and the square law.
pub fn thermo_identities(seed: u64) -> Check {
    let eos = test_eos();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = [1e-2, 1e-3, 1e-4];
    let mut worst_final = 0.0f64;
    let mut worst_order = f64::INFINITY;
    let mut stable = true;
    for _ in 0..100 {
        let (rho, theta) = (log_uniform(&mut rng, 1e-2, 1e2), log_uniform(&mut rng, 1e-1, 1e1));
        let pt = ThermoPoint::new(rho, theta).expect("positive sample");
        let pa = eos.partials(rho, theta);
        // residuals are scaled by the size of the terms that cancel
        let scale = [theta * pa.s_theta.abs() + pa.e_theta.abs(), theta * pa.s_rho.abs() + pa.e_rho.abs() + pa.p / (rho * rho)];
        let res: Vec<f64> = steps
            .iter()
            .map(|&h| {
                let (a, b) = gibbs_residuals(pt, &eos, h);
                (a.abs() / scale[0]).max(b.abs() / scale[1])
            })
            .collect();
        worst_final = worst_final.max(res[2]);
        // below 1e-11 the residual is rounding noise
        if res[1] > 1e-11 {
            worst_order = worst_order.min((res[0] / res[1]).log10());
        }
        stable &= pa.p_rho > 0.0 && pa.e_theta > 0.0;
    }
    let default_ok = validate_model(&Model::<f64>::default(), true).is_valid();
    let square = Model {
        eos: EquationOfState::new(PressureLaw::Custom(Arc::new(QuadraticPressure)), 0.0, 0.0),
        ..Model::<f64>::default()
    };
    let square_fails = validate_model(&square, true).violates(Hypothesis::PressureDeficitBound);
    let order_ok = worst_order >= 1.8;
    Check::new(
        "thermo identity suite",
        worst_final < 1e-8 && order_ok && stable && default_ok && square_fails,
        format!(
            "final Gibbs residual {worst_final:.2e} (< 1e-8), min order per decade {}, stability {stable}, \
             default law valid {default_ok}, Z^2 rejected {square_fails}",
            if worst_order.is_finite() { format!("{worst_order:.2}") } else { "n/a (rounding floor)".into() }
        ),
    )
}

/// Relative energy against the Bregman distance on random pairs.
pub fn bregman_equivalence(seed: u64) -> Check {
    let eos = test_eos();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut worst_rel = 0.0f64;
    let mut min_distinct = f64::INFINITY;
    let mut max_equal = 0.0f64;
    let sample = |rng: &mut ChaCha8Rng| {
        (log_uniform(rng, 0.2, 5.0), log_uniform(rng, 0.2, 5.0), rng.gen_range(-2.0..2.0))
    };
    for _ in 0..100 {
        let (r, t, u) = sample(&mut rng);
        let (rr, tr, ur) = sample(&mut rng);
        let (p, q) = (ThermoPoint::new(r, t).unwrap(), ThermoPoint::new(rr, tr).unwrap());
        let e = relative_energy(p, u, q, ur, &eos);
        let b = bregman_decomposition(&to_conservative(p, u, &eos).unwrap(), &to_conservative(q, ur, &eos).unwrap(), &eos)
            .unwrap_or(f64::NAN);
        worst_rel = worst_rel.max((e - b).abs() / e.abs().max(b.abs()));
        min_distinct = min_distinct.min(e);
        max_equal = max_equal.max(relative_energy(p, u, p, u, &eos).abs());
    }
    Check::new(
        "Bregman equivalence",
        worst_rel <= 1e-9 && min_distinct > 0.0 && max_equal <= 1e-12,
        format!("max relative gap {worst_rel:.2e} (<= 1e-9), min over distinct pairs {min_distinct:.3e}, max at equality {max_equal:.1e}"),
    )
}

/// Gradient and Laplacian stencils on quadratics.
pub fn operator_consistency() -> Check {
    let g = Grid1D::new(40, 1.0).expect("grid");
    let h = g.h();
    let q = g.sample(|x| x * x - 0.3 * x + 2.0);
    let grad = gradient(&q, h).expect("stencil");
    let lap = laplacian(&q, h, Closure::Dirichlet { left: q[0], right: q[40] }).expect("stencil");
    let eg = g.x().iter().zip(&grad).map(|(x, d): (&f64, &f64)| (d - (2.0 * x - 0.3)).abs()).fold(0.0, f64::max);
    let el = lap.iter().map(|v: &f64| (v - 2.0).abs()).fold(0.0, f64::max);
    Check::new(
        "operator consistency",
        eg < 1e-10 && el < 1e-8,
        format!("gradient error {eg:.1e}, laplacian error {el:.1e} on a quadratic"),
    )
}

/// Uniform rest state in diagnostic mode over 100 steps.
pub fn equilibrium_fixed_point() -> Check {
    let bd = BoundaryData::constant(1.0, [1.0; 2], [1.5; 2], [0.0; 2]);
    let params = SchemeParams { t_end: 0.1, dt: 1e-3, ..Default::default() }.diagnostic();
    let s = Scheme::new(Grid1D::new(32, 1.0).unwrap(), bd, Model::default(), params, Arc::new(NoForcing)).unwrap();
    let run = s
        .initial_state(vec![1.0; 33], vec![1.5; 33], &[0.0; 33])
        .and_then(|init| s.run(init, 1, |_, _| Ok(())));
    match run {
        Ok(traj) => {
            let drift = traj
                .states
                .iter()
                .flat_map(|st| {
                    st.rho
                        .iter()
                        .map(|r: &f64| (r - 1.0).abs())
                        .chain(st.theta.iter().map(|t: &f64| (t - 1.5).abs()))
                        .chain(st.u.iter().map(|u: &f64| u.abs()))
                })
                .fold(0.0, f64::max);
            Check::new(
                "equilibrium fixed point",
                drift <= 1e-12 && traj.reports.len() == 100,
                format!("max drift {drift:.1e} over {} steps", traj.reports.len()),
            )
        }
        Err(e) => Check::new("equilibrium fixed point", false, e.to_string()),
    }
}

/// Harmonic extension bounds for random wall pairs, zero tolerance.
pub fn maximum_principle(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa3);
    let mut violations = 0usize;
    for _ in 0..100 {
        let (a, b) = (log_uniform(&mut rng, 1e-2, 1e2), log_uniform(&mut rng, 1e-2, 1e2));
        let cells = rng.gen_range(2..=512);
        let length = log_uniform(&mut rng, 0.1, 10.0);
        let grid = Grid1D::new(cells, length).unwrap();
        let bd = BoundaryData::new(length, [Trace::Constant(1.0), Trace::Constant(1.0)], [Trace::Constant(a), Trace::Constant(b)], [Trace::Constant(0.0), Trace::Constant(0.0)]);
        let v = harmonic_extension(&bd, 0.0, &grid);
        let (lo, hi) = (a.min(b), a.max(b));
        violations += v.iter().filter(|x| **x < lo || **x > hi).count();
        if (HarmonicExtension { bd: &bd }).check(0.0, &grid, &bd).is_err() {
            violations += 1;
        }
    }
    Check::new(
        "harmonic maximum principle",
        violations == 0,
        format!("{violations} nodes outside the wall range over 100 random pairs"),
    )
}

/// One entry of the run matrix.
#[derive(Debug, Clone)]
pub struct MatrixCase {
    pub name: &'static str,
    pub config: RunConfig,
}

/// Physical runs with `Lambda = 1`, `beta = 7` covering inflow, outflow,
/// counterflow and impermeable walls, time-dependent traces, gravity, every
/// smoothing kind and the saturating law with radiation.
pub fn run_matrix() -> Vec<MatrixCase> {
    let base = {
        let mut c = RunConfig::default();
        c.transport.lambda = 1.0;
        c.transport.beta = 7.0;
        c.grid.cells = 48;
        c.scheme.dt = 2e-3;
        c.scheme.t_end = 0.1;
        c.initial.rho_bump = 0.2;
        c.initial.theta_bump = 0.3;
        c
    };
    let with = |name: &'static str, f: &dyn Fn(&mut RunConfig)| {
        let mut c = base.clone();
        f(&mut c);
        MatrixCase { name, config: c }
    };
    vec![
        with("through-flow", &|c| {
            c.boundary.theta_right = vec![1.5];
            c.boundary.u_left = vec![0.3];
            c.boundary.u_right = vec![0.3];
        }),
        with("counterflow", &|c| {
            c.boundary.rho_left = vec![1.4];
            c.boundary.rho_right = vec![0.9];
            c.boundary.u_left = vec![0.4];
            c.boundary.u_right = vec![-0.2];
        }),
        with("double outflow", &|c| {
            c.boundary.u_left = vec![-0.2];
            c.boundary.u_right = vec![0.3];
            c.boundary.theta_left = vec![1.2];
        }),
        with("heated impermeable", &|c| {
            c.boundary.theta_left = vec![2.0];
        }),
        with("time-dependent traces", &|c| {
            c.boundary.theta_left = vec![1.0, 2.0];
            c.boundary.u_left = vec![0.3, 1.0];
            c.boundary.u_right = vec![0.3];
            c.boundary.rho_left = vec![1.0, -1.0, 2.0];
        }),
        with("gravity", &|c| {
            c.forcing.g = -1.0;
            c.boundary.u_left = vec![0.1];
            c.boundary.u_right = vec![0.1];
        }),
        with("sharp inflow weight", &|c| {
            c.scheme.smoothing = SmoothingSpec::Sharp;
            c.boundary.u_left = vec![0.3];
            c.boundary.u_right = vec![0.3];
        }),
        with("mollified inflow weight", &|c| {
            c.scheme.smoothing = SmoothingSpec::Mollified;
            c.boundary.u_left = vec![0.05];
            c.boundary.u_right = vec![0.05];
        }),
        with("saturating law with radiation", &|c| {
            c.eos.law = LawSpec::Saturating;
            c.eos.radiation = 0.5;
            c.boundary.theta_right = vec![1.5];
            c.boundary.u_left = vec![0.3];
            c.boundary.u_right = vec![0.3];
        }),
    ]
}

/// Worst values seen over every accepted step of one matrix run.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixOutcome {
    pub name: String,
    pub steps: usize,
    pub min_rho: f64,
    pub min_theta: f64,
    /// `max |mass defect| dt / ∫ rho`
    pub mass_telescope: f64,
    pub min_entropy_production: f64,
    pub min_dissipation_margin: f64,
    /// conduction margin over `max(1, ∫ kappa theta_x^2/theta^2)`
    pub min_conduction_margin: f64,
    pub min_chain_margin: f64,
    pub error: Option<String>,
}

/// Runs one matrix case with the evaluator on every accepted step.
pub fn matrix_outcome(case: &MatrixCase) -> MatrixOutcome {
    let mut out = MatrixOutcome {
        name: case.name.into(),
        steps: 0,
        min_rho: f64::INFINITY,
        min_theta: f64::INFINITY,
        mass_telescope: 0.0,
        min_entropy_production: f64::INFINITY,
        min_dissipation_margin: f64::INFINITY,
        min_conduction_margin: f64::INFINITY,
        min_chain_margin: f64::INFINITY,
        error: None,
    };
    let built = case.config.build::<f64>();
    let (scheme, _) = match built {
        Ok(b) => b,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    let [rho, theta, u] = case.config.initial_fields(&scheme, None);
    let init = match scheme.initial_state(rho, theta, &u) {
        Ok(s) => s,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    let mut ev = Evaluator::new(&scheme);
    let mut failure = None;
    let res = scheme.run(init, 1, |state, report| {
        match ev.observe(state) {
            Ok(row) => {
                out.min_entropy_production = out.min_entropy_production.min(row.min_entropy_production);
                let a = row.apriori;
                out.min_dissipation_margin = out.min_dissipation_margin.min(a.dissipation_margin);
                out.min_conduction_margin = out.min_conduction_margin.min(a.conduction_margin / a.conduction.abs().max(1.0));
                out.min_chain_margin = out.min_chain_margin.min(a.chain_margin);
            }
            Err(e) => failure = Some(e.to_string()),
        }
        if let Some(r) = report {
            out.steps += 1;
            out.min_rho = out.min_rho.min(r.min_rho);
            out.min_theta = out.min_theta.min(r.min_theta);
            let mass = scheme.grid.integrate(&state.rho);
            out.mass_telescope = out.mass_telescope.max((r.mass_defect * r.dt).abs() / mass);
        }
        Ok(())
    });
    if let Err(e) = res {
        out.error = Some(e.to_string());
    }
    if failure.is_some() && out.error.is_none() {
        out.error = failure;
    }
    out
}

/// Every matrix case, in parallel, in matrix order.
pub fn matrix_outcomes() -> Vec<MatrixOutcome> {
    run_matrix().par_iter().map(matrix_outcome).collect()
}

fn failed_runs(outcomes: &[MatrixOutcome]) -> Vec<String> {
    outcomes.iter().filter_map(|o| o.error.as_ref().map(|e| format!("{}: {e}", o.name))).collect()
}

/// Positivity and mass telescope over the matrix.
pub fn positivity_and_mass(outcomes: &[MatrixOutcome]) -> Check {
    let errs = failed_runs(outcomes);
    let steps: usize = outcomes.iter().map(|o| o.steps).sum();
    let min_rho = outcomes.iter().map(|o| o.min_rho).fold(f64::INFINITY, f64::min);
    let min_theta = outcomes.iter().map(|o| o.min_theta).fold(f64::INFINITY, f64::min);
    let telescope = outcomes.iter().map(|o| o.mass_telescope).fold(0.0, f64::max);
    Check::new(
        "positivity and mass telescope",
        errs.is_empty() && min_rho > 0.0 && min_theta > 0.0 && telescope <= 1e-10,
        if errs.is_empty() {
            format!("{steps} steps in {} runs, min rho {min_rho:.3}, min theta {min_theta:.3}, max telescope defect {telescope:.1e} (<= 1e-10)", outcomes.len())
        } else {
            errs.join("; ")
        },
    )
}

/// Nodal entropy production over the matrix, zero tolerance.
pub fn entropy_production_sign(outcomes: &[MatrixOutcome]) -> Check {
    let errs = failed_runs(outcomes);
    let min = outcomes.iter().map(|o| o.min_entropy_production).fold(f64::INFINITY, f64::min);
    Check::new(
        "nodal entropy production >= 0",
        errs.is_empty() && min >= 0.0,
        if errs.is_empty() { format!("min nodal value {min:.3e} over every accepted step") } else { errs.join("; ") },
    )
}

/// Dissipation, conduction and sixth-moment chain margins over the matrix.
pub fn apriori_signs(outcomes: &[MatrixOutcome]) -> Check {
    let errs = failed_runs(outcomes);
    let d = outcomes.iter().map(|o| o.min_dissipation_margin).fold(f64::INFINITY, f64::min);
    let k = outcomes.iter().map(|o| o.min_conduction_margin).fold(f64::INFINITY, f64::min);
    let c = outcomes.iter().map(|o| o.min_chain_margin).fold(f64::INFINITY, f64::min);
    Check::new(
        "a priori component signs",
        errs.is_empty() && d >= 0.0 && k >= -1e-12 && c >= 0.0,
        if errs.is_empty() {
            format!("min margins: dissipation {d:.3e}, conduction {k:.1e} (>= -1e-12 scaled), chain {c:.3e}")
        } else {
            errs.join("; ")
        },
    )
}

/// Checks run by `verify`.
pub fn verify_suite(cfg: &RunConfig) -> Vec<Check> {
    let outcomes = matrix_outcomes();
    let mut checks = vec![
        thermo_identities(cfg.seed),
        bregman_equivalence(cfg.seed),
        operator_consistency(),
        equilibrium_fixed_point(),
        positivity_and_mass(&outcomes),
        entropy_production_sign(&outcomes),
        maximum_principle(cfg.seed),
        apriori_signs(&outcomes),
    ];
    checks.push(configured_run(cfg));
    checks
}

/// The configured run itself through the evaluator.
pub fn configured_run(cfg: &RunConfig) -> Check {
    match run_config(cfg) {
        Ok((scheme, case, traj)) => {
            let mut ev = Evaluator::new(&scheme);
            if let Some(c) = case.as_ref() {
                ev = ev.with_reference(c);
            }
            let bad = traj.states.iter().find_map(|s| ev.observe(s).err());
            Check::new(
                "configured run sign invariants",
                bad.is_none(),
                bad.map(|e| e.to_string()).unwrap_or_else(|| format!("{} samples", traj.states.len())),
            )
        }
        Err(e) => Check::new("configured run sign invariants", false, e.to_string()),
    }
}

