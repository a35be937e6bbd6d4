//! Refinement and perturbation ladders. Independent cases of a ladder run on
//! the rayon pool and are merged by index.

use anyhow::{anyhow, bail, Result};
use nsf_core::diagnostics::{
    ballistic_residual, relative_energy_field, weak_strong_monitor, BalanceVariant, HarmonicExtension, StrongReference,
};
use nsf_core::discretization::FieldState;
use nsf_core::scheme::{Scheme, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ManufacturedSpec, RunConfig};
use crate::manufactured::{CaseId, ManufacturedCase};

/// Copy of `cfg` driven by a manufactured case on `cells` cells.
pub fn manufactured_config(cfg: &RunConfig, case: CaseId, cells: usize, dt: f64, t_end: f64) -> RunConfig {
    let mut c = cfg.clone();
    c.manufactured = Some(ManufacturedSpec { case });
    c.grid.cells = cells;
    c.grid.length = crate::manufactured::CASE_LENGTH;
    c.scheme.dt = dt;
    c.scheme.t_end = t_end;
    c
}

/// Builds the scheme of `cfg` and runs it from the configured initial data
/// with every accepted step sampled.
pub fn run_config(cfg: &RunConfig) -> Result<(Scheme<f64>, Option<ManufacturedCase<f64>>, Trajectory<f64>)> {
    let (scheme, case) = cfg.build::<f64>()?;
    let [rho, theta, u] = cfg.initial_fields(&scheme, case.as_ref());
    let init = scheme.initial_state(rho, theta, &u)?;
    let traj = scheme.run(init, 1, |_, _| Ok(()))?;
    Ok((scheme, case, traj))
}

fn final_state(traj: &Trajectory<f64>) -> &FieldState<f64> {
    traj.states.last().expect("trajectory holds the initial state")
}

/// Root mean square over the nodes of the coarse grid of the three fields'
/// differences; `fine` has `ratio` times as many cells.
fn coarse_difference(coarse: &FieldState<f64>, fine: &FieldState<f64>, ratio: usize) -> f64 {
    let n = coarse.rho.len();
    let mut acc = 0.0;
    for i in 0..n {
        let j = i * ratio;
        acc += (coarse.rho[i] - fine.rho[j]).powi(2)
            + (coarse.theta[i] - fine.theta[j]).powi(2)
            + (coarse.u[i] - fine.u[j]).powi(2);
    }
    (acc / n as f64).sqrt()
}

fn exact_error(state: &FieldState<f64>, scheme: &Scheme<f64>, case: &ManufacturedCase<f64>) -> f64 {
    use nsf_core::diagnostics::ReferenceTrio;
    let t = state.t;
    let n = state.rho.len();
    let mut acc = 0.0;
    for (i, &x) in scheme.grid.x().iter().enumerate() {
        acc += (state.rho[i] - case.rho(t, x)).powi(2)
            + (state.theta[i] - case.theta(t, x)).powi(2)
            + (state.u[i] - case.u(t, x)).powi(2);
    }
    (acc / n as f64).sqrt()
}

/// Self-convergence ladder in one refinement parameter.
#[derive(Debug, Clone, Serialize)]
pub struct Ladder {
    /// `dt` or cell count of each level
    pub levels: Vec<f64>,
    /// difference between successive levels on the coarser grid
    pub differences: Vec<f64>,
    /// `log2` of successive difference ratios
    pub orders: Vec<f64>,
    /// distance of each level to the closed-form trio
    pub errors: Vec<f64>,
    /// every difference is below the floor
    pub exact: bool,
}

impl Ladder {
    fn from_differences(levels: Vec<f64>, differences: Vec<f64>, errors: Vec<f64>, floor: f64) -> Self {
        let exact = differences.iter().all(|d| *d <= floor);
        let orders = differences
            .windows(2)
            .filter(|w| w[0] > floor && w[1] > floor)
            .map(|w| (w[0] / w[1]).log2())
            .collect();
        Self { levels, differences, orders, errors, exact }
    }

    /// Order observed on the finest pair of differences.
    pub fn observed_order(&self) -> Option<f64> {
        self.orders.last().copied()
    }

    pub fn describe(&self) -> String {
        if self.exact {
            "exact (residual at floor)".into()
        } else {
            match self.observed_order() {
                Some(p) => format!("{p:.3}"),
                None => "undetermined".into(),
            }
        }
    }

    /// Exact ladders pass; otherwise the finest order must reach `min`.
    pub fn meets(&self, min: f64) -> bool {
        self.exact || self.observed_order().is_some_and(|p| p >= min)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceResult {
    pub case: CaseId,
    pub dt: Ladder,
    pub h: Ladder,
}

/// dt ladder on a fixed grid and h ladder at a fixed step for a
/// manufactured case.
pub fn convergence_ladders(cfg: &RunConfig, case: CaseId) -> Result<ConvergenceResult> {
    let spec = &cfg.convergence;
    if spec.dt_levels.len() < 2 || spec.h_levels.len() < 2 {
        bail!("convergence ladders need at least two levels");
    }
    if spec.h_levels.windows(2).any(|w| w[1] != 2 * w[0]) {
        bail!("h_levels must double from level to level");
    }
    let dt_runs: Vec<_> = spec
        .dt_levels
        .par_iter()
        .map(|&dt| run_config(&manufactured_config(cfg, case, spec.dt_cells, dt, spec.t_end)))
        .collect::<Result<_>>()?;
    let h_runs: Vec<_> = spec
        .h_levels
        .par_iter()
        .map(|&n| run_config(&manufactured_config(cfg, case, n, spec.h_dt, spec.t_end)))
        .collect::<Result<_>>()?;
    let errors = |runs: &[(Scheme<f64>, Option<ManufacturedCase<f64>>, Trajectory<f64>)]| {
        runs.iter()
            .map(|(s, c, tr)| exact_error(final_state(tr), s, c.as_ref().expect("manufactured")))
            .collect::<Vec<_>>()
    };
    let dt_diff = dt_runs
        .windows(2)
        .map(|w| coarse_difference(final_state(&w[0].2), final_state(&w[1].2), 1))
        .collect();
    let h_diff = h_runs
        .windows(2)
        .map(|w| coarse_difference(final_state(&w[0].2), final_state(&w[1].2), 2))
        .collect();
    Ok(ConvergenceResult {
        case,
        dt: Ladder::from_differences(spec.dt_levels.clone(), dt_diff, errors(&dt_runs), spec.floor),
        h: Ladder::from_differences(
            spec.h_levels.iter().map(|n| *n as f64).collect(),
            h_diff,
            errors(&h_runs),
            spec.floor,
        ),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BallisticLevel {
    pub cells: usize,
    pub dt: f64,
    pub defect: f64,
    pub corrupted_defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BallisticResult {
    pub levels: Vec<BallisticLevel>,
    /// `safety |D_k - D_{k+1}|` for every level but the finest
    pub tolerances: Vec<f64>,
    pub tolerance_ratios: Vec<f64>,
    pub observed_orders: Vec<f64>,
}

impl BallisticResult {
    pub fn within_tolerance(&self) -> bool {
        self.tolerances.iter().zip(&self.levels).all(|(tol, l)| l.defect <= *tol)
    }

    pub fn tolerance_shrinks(&self, factor: f64) -> bool {
        self.tolerance_ratios.iter().all(|r| *r >= factor)
    }

    pub fn detector_fires(&self, factor: f64) -> bool {
        self.tolerances.iter().zip(&self.levels).all(|(tol, l)| l.corrupted_defect > factor * tol)
    }
}

/// States of `states` with the interior temperature of the second half of
/// the samples scaled by `factor`.
pub fn corrupt(states: &[FieldState<f64>], factor: f64) -> Vec<FieldState<f64>> {
    let half = states.len() / 2;
    states
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut s = s.clone();
            if k >= half {
                let n = s.theta.len();
                s.theta[1..n - 1].iter_mut().for_each(|v| *v *= factor);
            }
            s
        })
        .collect()
}

/// Ballistic defect over the whole run of the configured physical flow at
/// each refinement level, for the scheme trajectory and a corrupted copy.
pub fn ballistic_ladder(cfg: &RunConfig) -> Result<BallisticResult> {
    let spec = &cfg.ballistic;
    if spec.cells.len() < 2 {
        bail!("the ballistic ladder needs at least two levels");
    }
    let levels: Vec<BallisticLevel> = spec
        .cells
        .par_iter()
        .enumerate()
        .map(|(k, &cells)| {
            let mut c = cfg.clone();
            c.manufactured = None;
            c.grid.cells = cells;
            c.scheme.dt = spec.dt / (1u64 << k) as f64;
            c.scheme.t_end = spec.t_end;
            let (scheme, _, traj) = run_config(&c)?;
            let ext = HarmonicExtension { bd: &scheme.bd };
            let clean = ballistic_residual(&scheme, &traj.states, &ext, BalanceVariant::Regularized)?;
            let bad = corrupt(&traj.states, spec.corruption);
            let dirty = ballistic_residual(&scheme, &bad, &ext, BalanceVariant::Regularized)?;
            Ok(BallisticLevel { cells, dt: c.scheme.dt, defect: clean.defect, corrupted_defect: dirty.defect })
        })
        .collect::<Result<_>>()?;
    let tolerances: Vec<f64> = levels.windows(2).map(|w| spec.safety * (w[0].defect - w[1].defect).abs()).collect();
    let tolerance_ratios: Vec<f64> = tolerances.windows(2).map(|w| w[0] / w[1]).collect();
    let observed_orders = tolerance_ratios.iter().map(|r| r.log2()).collect();
    Ok(BallisticResult { levels, tolerances, tolerance_ratios, observed_orders })
}

/// Smooth random profile `sum_k c_k sin(k pi x / L) / k^2` scaled to unit
/// maximum; it vanishes at both walls.
pub fn perturbation_profile(rng: &mut ChaCha8Rng, x: &[f64], length: f64, modes: usize) -> Vec<f64> {
    let coeffs: Vec<f64> = (1..=modes.max(1)).map(|k| rng.gen_range(-1.0..1.0) / (k * k) as f64).collect();
    let raw: Vec<f64> = x
        .iter()
        .map(|&xi| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64 * std::f64::consts::PI * xi / length).sin())
                .sum()
        })
        .collect();
    let m = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    raw.into_iter().map(|v| if m > 0.0 { v / m } else { 0.0 }).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbedRun {
    pub amplitude: f64,
    /// relative energy against the unperturbed run at the final time
    pub final_energy: f64,
    pub initial_energy: f64,
    pub gronwall_c1: f64,
    pub gronwall_c2: f64,
    pub gronwall_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakStrongResult {
    pub case: CaseId,
    pub runs: Vec<PerturbedRun>,
    /// least-squares slope of `ln E(t_end)` against `ln a`
    pub slope: f64,
    pub floor_dt: Vec<f64>,
    /// relative energy of the unperturbed run against the closed-form trio
    pub floor: Vec<f64>,
}

impl WeakStrongResult {
    pub fn floor_decreases(&self) -> bool {
        self.floor.windows(2).all(|w| w[1] < w[0])
    }
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn perturbed_initial(
    scheme: &Scheme<f64>,
    base: [Vec<f64>; 3],
    profiles: &[Vec<f64>; 3],
    amplitude: f64,
) -> Result<FieldState<f64>> {
    let [mut rho, mut theta, mut u] = base;
    for i in 0..rho.len() {
        rho[i] *= 1.0 + amplitude * profiles[0][i];
        theta[i] *= 1.0 + amplitude * profiles[1][i];
        u[i] += amplitude * profiles[2][i];
    }
    Ok(scheme.initial_state(rho, theta, &u)?)
}

/// Perturbation ladder on a manufactured case: each perturbed run is
/// compared with the unperturbed discrete run, and the unperturbed run with
/// the closed-form trio at each floor step.
pub fn weak_strong_ladder(cfg: &RunConfig, seed: u64) -> Result<WeakStrongResult> {
    let spec = &cfg.weakstrong;
    if spec.amplitudes.len() < 2 {
        bail!("the weak-strong ladder needs at least two amplitudes");
    }
    let case = spec.case;
    let base_cfg = manufactured_config(cfg, case, spec.cells, spec.dt, spec.t_end);
    let (scheme, mcase, reference) = run_config(&base_cfg)?;
    let mcase = mcase.ok_or_else(|| anyhow!("manufactured case missing"))?;
    let refs = StrongReference::from_states(&reference.states, &scheme.grid, &scheme.basis, &scheme.bd)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = scheme.grid.x().to_vec();
    let l = scheme.grid.length();
    let profiles = [
        perturbation_profile(&mut rng, &x, l, spec.profile_modes),
        perturbation_profile(&mut rng, &x, l, spec.profile_modes),
        perturbation_profile(&mut rng, &x, l, spec.profile_modes),
    ];
    let runs: Vec<PerturbedRun> = spec
        .amplitudes
        .par_iter()
        .map(|&a| {
            let base = base_cfg.initial_fields(&scheme, Some(&mcase));
            let init = perturbed_initial(&scheme, base, &profiles, a)?;
            let traj = scheme.run(init, 1, |_, _| Ok(()))?;
            if traj.states.len() != reference.states.len() {
                bail!("perturbed run at amplitude {a} took a different number of steps");
            }
            let series = weak_strong_monitor(&traj.states, &refs, &scheme.grid, &scheme.model)?;
            Ok(PerturbedRun {
                amplitude: a,
                final_energy: series.final_energy(),
                initial_energy: series.relative_energy[0],
                gronwall_c1: series.fit.c1,
                gronwall_c2: series.fit.c2,
                gronwall_holds: series.fit.holds,
            })
        })
        .collect::<Result<_>>()?;
    let lx: Vec<f64> = runs.iter().map(|r| r.amplitude.ln()).collect();
    let ly: Vec<f64> = runs.iter().map(|r| r.final_energy.ln()).collect();
    let slope = least_squares_slope(&lx, &ly);

    let floor: Vec<f64> = spec
        .floor_dt
        .par_iter()
        .map(|&dt| {
            let (s, c, tr) = run_config(&manufactured_config(cfg, case, spec.cells, dt, spec.t_end))?;
            let c = c.expect("manufactured");
            let last = final_state(&tr);
            let r = StrongReference::from_closed_form(&c, last.t, &s.grid);
            Ok(relative_energy_field(last, &r, &s.grid, &s.model.eos))
        })
        .collect::<Result<_>>()?;
    Ok(WeakStrongResult { case, runs, slope, floor_dt: spec.floor_dt.clone(), floor })
}
