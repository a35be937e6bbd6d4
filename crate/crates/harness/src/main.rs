use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nsf_harness::commands::{cmd_convergence, cmd_run, cmd_verify, cmd_weakstrong, CommandOptions};
use nsf_harness::config::{load_config, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "nsf", version, about = "Slab Navier-Stokes-Fourier solver and verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration; built-in defaults when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// overrides the configured seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// overrides the probe stride
    #[arg(long, global = true)]
    stride: Option<usize>,
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Run the configured problem and write diagnostics
    Run,
    /// Check the invariant suite
    Verify,
    /// Refinement ladders on a manufactured case
    Convergence,
    /// Perturbation ladder of the relative energy
    Weakstrong,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let loaded = match &cli.config {
        Some(path) => load_config(path),
        None => {
            let cfg = RunConfig::default();
            cfg.check().map(|w| (cfg, w))
        }
    };
    let (mut cfg, warnings) = match loaded {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(stride) = cli.stride {
        cfg.output.stride = stride.max(1);
    }
    for w in &warnings {
        eprintln!("{w}");
    }
    let opts = CommandOptions { out: cli.out.clone(), quiet: cli.quiet };
    let outcome = match cli.command {
        Command::Run => cmd_run(&cfg, &warnings, &opts),
        Command::Verify => cmd_verify(&cfg, &warnings, &opts),
        Command::Convergence => cmd_convergence(&cfg, &warnings, &opts),
        Command::Weakstrong => cmd_weakstrong(&cfg, &warnings, &opts),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("criteria not met");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
