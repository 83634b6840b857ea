use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use memspin::config::Config;
use memspin::error::RunError;
use memspin::runner;
use memspin_core::Component;

/// Macrospin dynamics with a Lorentzian memory kernel.
///
/// Run directories default to `$MEMSPIN_RUNS_DIR/<timestamp>-<hash>`, with
/// `runs` as the parent when the variable is unset.
#[derive(Debug, Parser)]
#[command(name = "memspin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for this run.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seeds per temperature (sweep-temp) or noise realisations (noise-check).
    #[arg(long, global = true)]
    seeds: Option<usize>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Magnetisation component to analyse.
    #[arg(long, global = true, value_enum)]
    component: Option<ComponentArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ComponentArg {
    X,
    Y,
    Z,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single run: trajectory, spectrum and peaks.
    Simulate,
    /// Ensemble spectra over the configured temperatures.
    SweepTemp,
    /// Spectra with the inertial time varied by the configured fractions.
    SweepTau,
    /// Zeros of the truncated susceptibility.
    Predict,
    /// Averaged noise periodogram against its target PSD.
    NoiseCheck,
    /// Print the bath and local damping parameters in each other's terms.
    ConvertParams,
}

fn run(cli: Cli) -> Result<(), RunError> {
    let Some(path) = cli.config.as_deref() else {
        return Err(RunError::Validation(vec!["--config PATH is required".into()]));
    };
    let mut cfg = Config::load(path)?;
    let mut overrides = Vec::new();
    if let Some(c) = cli.component {
        cfg.analysis.component = match c {
            ComponentArg::X => Component::X,
            ComponentArg::Y => Component::Y,
            ComponentArg::Z => Component::Z,
        };
        overrides.push(format!("component={}", cfg.analysis.component.name()));
    }
    if let Some(n) = cli.seeds {
        if n == 0 {
            return Err(RunError::Validation(vec!["--seeds: must be at least 1".into()]));
        }
        overrides.push(format!("seeds={n}"));
    }
    if !overrides.is_empty() {
        cfg.rehash(&overrides.join(","));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(RunError::Validation(vec!["--workers: must be at least 1".into()]));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().expect("thread pool");
    let out = cli.out.as_deref();
    let dir = pool.install(|| match cli.command {
        Command::Simulate => runner::cmd_simulate(&cfg, out).map(Some),
        Command::SweepTemp => {
            let seeds = cli.seeds.unwrap_or(cfg.sweep.seeds_per_temp);
            runner::cmd_sweep_temperature(&cfg, &cfg.sweep.temperatures, seeds, out).map(Some)
        }
        Command::SweepTau => runner::cmd_sweep_tau(&cfg, &cfg.sweep.tau_fractions, out).map(Some),
        Command::Predict => runner::cmd_predict(&cfg, out).map(Some),
        Command::NoiseCheck => {
            let n = cli.seeds.unwrap_or(cfg.sweep.noise_realizations);
            runner::cmd_noise_check(&cfg, n, out).map(Some)
        }
        Command::ConvertParams => {
            print!("{}", runner::convert_params(&cfg)?);
            Ok(None)
        }
    })?;
    if let Some(d) = dir {
        println!("{}", d.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
