//! `hmv`: run a scenario config and write its report.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hermvol::scenario::{emit, run, CheckName, OutputFormat, ScenarioConfig};
use hermvol::Error;

/// Every flag can also be set through an `HMV_`-prefixed environment variable.
#[derive(Debug, Parser)]
#[command(
    name = "hmv",
    version,
    about = "Volume-invariance checks for Hermitian metrics"
)]
struct Cli {
    /// Scenario config (TOML).
    #[arg(long, env = "HMV_CONFIG")]
    config: PathBuf,

    /// Checks to run, replacing the config's list. Repeatable.
    #[arg(long = "check", env = "HMV_CHECK", value_delimiter = ',')]
    checks: Vec<String>,

    #[arg(long, env = "HMV_SEED")]
    seed: Option<u64>,

    /// Output directory; without it the JSON report goes to stdout.
    #[arg(long, env = "HMV_OUT")]
    out: Option<PathBuf>,

    /// Comparison grid per real axis (replaces the config's grid list).
    #[arg(long, env = "HMV_GRID")]
    grid: Option<usize>,

    /// Fourier bandwidth cap on every axis.
    #[arg(long, env = "HMV_BANDWIDTH_CAP")]
    bandwidth_cap: Option<u32>,

    /// Multiplies every tolerance.
    #[arg(long, env = "HMV_TOL_SCALE")]
    tol_scale: Option<f64>,

    /// json, csv or both.
    #[arg(long, env = "HMV_FORMAT")]
    format: Option<String>,

    /// Worker threads (reports do not depend on it).
    #[arg(long, env = "HMV_THREADS")]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::BandwidthOverflow { .. } => 3,
        Error::Capability(_) => 4,
        Error::Io(_) => 6,
        _ => 1,
    }
}

fn load(cli: &Cli) -> Result<ScenarioConfig, Error> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| Error::Io(format!("{}: {e}", cli.config.display())))?;
    let mut cfg = ScenarioConfig::from_toml(&text)?;
    if !cli.checks.is_empty() {
        cfg.checks = cli
            .checks
            .iter()
            .map(|c| CheckName::parse(c.trim()))
            .collect::<Result<_, _>>()?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(grid) = cli.grid {
        if grid == 0 {
            return Err(Error::Config("--grid must be positive".into()));
        }
        cfg.harness.comparison_grids = vec![grid];
    }
    if let Some(cap) = cli.bandwidth_cap {
        cfg.harness.bandwidth_cap = Some(cap);
    }
    if let Some(x) = cli.tol_scale {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Config(format!(
                "--tol-scale must be positive, got {x}"
            )));
        }
        cfg.tolerances = cfg.tolerances.scaled(x);
    }
    if let Some(f) = &cli.format {
        cfg.outputs.format = OutputFormat::parse(f)?;
    }
    if let Some(out) = &cli.out {
        cfg.outputs.dir = Some(out.display().to_string());
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<bool, Error> {
    let cfg = load(cli)?;
    let (report, timings) = run(&cfg)?;
    match &cfg.outputs.dir {
        Some(dir) => {
            emit(&report, &timings, dir.as_ref(), cfg.outputs.format)?;
            for (check, secs) in &timings.checks {
                eprintln!("{check:<13} {secs:>9.3}s");
            }
            eprintln!("report written to {dir}");
        }
        None => println!("{}", report.to_json()?),
    }
    for issue in &report.inconsistencies {
        eprintln!("inconsistency: {issue}");
    }
    Ok(report.consistent)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
