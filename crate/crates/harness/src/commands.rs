//! The four subcommands. Each returns whether its pass criteria held; I/O
//! and run failures are errors.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use nsf_core::diagnostics::{AprioriSettings, BalanceVariant, Evaluator};
use nsf_core::Real;
use serde_json::{json, Value};

use crate::checks::verify_suite;
use crate::config::{Precision, RunConfig, VariantSpec};
use crate::experiments::{ballistic_ladder, convergence_ladders, weak_strong_ladder};
use crate::output::{report_json, write_snapshot, write_summary, CsvWriter, CSV_FILE, SNAPSHOT_DIR};

#[derive(Debug, Clone)]
pub struct CommandOptions {
    pub out: PathBuf,
    pub quiet: bool,
}

fn say(opts: &CommandOptions, line: impl AsRef<str>) {
    if !opts.quiet {
        println!("{}", line.as_ref());
    }
}

/// Runs the configured problem, writing the diagnostics CSV, snapshots and
/// the summary. A sign violation aborts the run with an error after the
/// rows so far are flushed.
pub fn cmd_run(cfg: &RunConfig, warnings: &[String], opts: &CommandOptions) -> Result<bool> {
    std::fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
    let final_row = match cfg.precision {
        Precision::F64 => run_in::<f64>(cfg, opts)?,
        Precision::F32 => run_in::<f32>(cfg, opts)?,
    };
    write_summary(&opts.out, "run", cfg, warnings, true, Some(final_row.clone()), json!({}))?;
    say(opts, format!("run finished; outputs in {}", opts.out.display()));
    Ok(true)
}

fn run_in<T: Real>(cfg: &RunConfig, opts: &CommandOptions) -> Result<Value> {
    let (scheme, case) = cfg.build::<T>()?;
    let [rho, theta, u] = cfg.initial_fields(&scheme, case.as_ref());
    let init = scheme.initial_state(rho, theta, &u)?;
    let mut ev = Evaluator::new(&scheme).with_settings(AprioriSettings {
        truncation: cfg.diagnostics.truncation,
        entropy_constant: cfg.diagnostics.entropy_constant,
    });
    ev.variant = match cfg.diagnostics.variant {
        VariantSpec::Regularized => BalanceVariant::Regularized,
        VariantSpec::Physical => BalanceVariant::Physical,
    };
    if let Some(c) = case.as_ref() {
        ev = ev.with_reference(c);
    }
    let mut csv = CsvWriter::create(&opts.out.join(CSV_FILE))?;
    let snap_dir = opts.out.join(SNAPSHOT_DIR);
    let every = cfg.output.snapshot_every;
    let mut rows = 0usize;
    let mut last = Value::Null;
    let mut failure: Option<anyhow::Error> = None;
    let result = scheme.run(init, cfg.output.stride, |state, _| {
        if failure.is_some() {
            return Ok(());
        }
        let mut step = || -> Result<()> {
            let row = ev.observe(state)?;
            csv.write(&row)?;
            if every > 0 && rows % every == 0 {
                write_snapshot(&snap_dir, rows, state, &scheme.grid, cfg.precision)?;
            }
            last = report_json(&row);
            Ok(())
        };
        if let Err(e) = step() {
            failure = Some(e);
        }
        rows += 1;
        Ok(())
    });
    csv.finish()?;
    if let Some(e) = failure {
        return Err(e.context("run aborted"));
    }
    let traj = result?;
    if every > 0 {
        let final_state = traj.states.last().expect("initial state");
        write_snapshot(&snap_dir, rows, final_state, &scheme.grid, cfg.precision)?;
    }
    Ok(last)
}

/// Prints the invariant table and records it in the summary.
pub fn cmd_verify(cfg: &RunConfig, warnings: &[String], opts: &CommandOptions) -> Result<bool> {
    let checks = verify_suite(cfg);
    for c in &checks {
        say(opts, c.to_string());
    }
    let passed = checks.iter().all(|c| c.passed);
    write_summary(&opts.out, "verify", cfg, warnings, passed, None, json!({ "checks": checks }))?;
    Ok(passed)
}

/// Manufactured dt and h ladders and the ballistic ladder.
pub fn cmd_convergence(cfg: &RunConfig, warnings: &[String], opts: &CommandOptions) -> Result<bool> {
    let spec = &cfg.convergence;
    let conv = convergence_ladders(cfg, spec.case)?;
    say(opts, format!("case {}", conv.case));
    for (name, ladder, min) in [("dt", &conv.dt, spec.min_order), ("h", &conv.h, spec.min_order)] {
        say(opts, format!("  {name:<3} levels {:?}", ladder.levels));
        say(opts, format!("      differences {:?}", ladder.differences));
        say(opts, format!("      observed order {} (needs >= {min})", ladder.describe()));
    }
    let ball = ballistic_ladder(cfg)?;
    for (l, tol) in ball.levels.iter().zip(ball.tolerances.iter().map(Some).chain(std::iter::once(None))) {
        let tol = tol.map(|t| format!("{t:.3e}")).unwrap_or_else(|| "-".into());
        say(
            opts,
            format!(
                "  ballistic N = {:<4} dt = {:.2e}: defect {:.3e}, tol {tol}, corrupted {:.3e}",
                l.cells, l.dt, l.defect, l.corrupted_defect
            ),
        );
    }
    let passed = conv.dt.meets(spec.min_order) && conv.h.meets(spec.min_order);
    write_summary(
        &opts.out,
        "convergence",
        cfg,
        warnings,
        passed,
        None,
        json!({ "manufactured": conv, "ballistic": ball }),
    )?;
    Ok(passed)
}

/// Perturbation ladder with the least-squares slope of the final relative
/// energy against the amplitude.
pub fn cmd_weakstrong(cfg: &RunConfig, warnings: &[String], opts: &CommandOptions) -> Result<bool> {
    let spec = &cfg.weakstrong;
    if spec.amplitudes.iter().any(|a| !(*a > 0.0)) {
        bail!("amplitudes must be positive");
    }
    let res = weak_strong_ladder(cfg, cfg.seed)?;
    say(opts, format!("case {}", res.case));
    for r in &res.runs {
        say(
            opts,
            format!(
                "  a = {:.1e}: E(0) = {:.3e}, E(t_end) = {:.3e}, Gronwall C1 = {:.3e}, C2 = {:.3e}",
                r.amplitude, r.initial_energy, r.final_energy, r.gronwall_c1, r.gronwall_c2
            ),
        );
    }
    say(opts, format!("  slope {:.4} (needs >= {})", res.slope, spec.min_slope));
    for (dt, f) in res.floor_dt.iter().zip(&res.floor) {
        say(opts, format!("  floor dt = {dt:.1e}: {f:.3e}"));
    }
    let passed = res.slope >= spec.min_slope;
    write_summary(&opts.out, "weakstrong", cfg, warnings, passed, None, serde_json::to_value(&res)?)?;
    Ok(passed)
}
