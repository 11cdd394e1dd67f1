// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit status is 0 on success, 2 for usage and configuration errors and 1
//! for solver failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::sweep::{self, ScenarioConfig, SweepResult};

#[derive(Debug, Parser)]
#[command(
    name = "kpo-spectro",
    version,
    about = "Reflection spectroscopy of a Kerr parametric oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Scenario JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Override a field, e.g. `--set beta_over_2pi_MHz=5` or `--set sweep.beta.points=11`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Worker threads.
    #[arg(long, env = "KPO_SPECTRO_JOBS")]
    jobs: Option<usize>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Replace outputs produced by a different configuration.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// |Gamma| over probe detuning and pump amplitude.
    Spectrum2d(RunArgs),
    /// Gamma over probe detuning at the configured pump amplitude.
    Spectrum1d(RunArgs),
    /// Labeled energy levels along the pump grid.
    Levels(RunArgs),
    /// Stationary populations along the pump grid.
    Populations(RunArgs),
    /// Nominal decay rates along the pump grid.
    Nominal(RunArgs),
    /// Peak/dip indicator along the pump grid.
    Eta(RunArgs),
    /// Wigner function of the stationary state, one file per pump amplitude.
    Wigner(RunArgs),
    /// Stationary density matrix at the configured pump amplitude.
    Steady(RunArgs),
    /// Parse and check a scenario without running it.
    ValidateConfig(ConfigArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum2d(_) => "spectrum2d",
            Command::Spectrum1d(_) => "spectrum1d",
            Command::Levels(_) => "levels",
            Command::Populations(_) => "populations",
            Command::Nominal(_) => "nominal",
            Command::Eta(_) => "eta",
            Command::Wigner(_) => "wigner",
            Command::Steady(_) => "steady",
            Command::ValidateConfig(_) => "validate-config",
        }
    }
}

fn load(args: &ConfigArgs) -> Result<ScenarioConfig> {
    ScenarioConfig::from_path(&args.config, &args.overrides)
}

fn execute(name: &'static str, cfg: &ScenarioConfig) -> Result<Vec<SweepResult>> {
    Ok(match name {
        "spectrum2d" => vec![sweep::run_spectrum_2d(cfg)?],
        "spectrum1d" => vec![sweep::run_spectrum_1d(cfg)?],
        "levels" => vec![sweep::run_levels(cfg)?],
        "populations" => vec![sweep::run_populations(cfg)?],
        "nominal" => vec![sweep::run_nominal(cfg)?],
        "eta" => vec![sweep::run_eta(cfg)?],
        "wigner" => sweep::run_wigner(cfg)?,
        "steady" => vec![sweep::run_steady(cfg)?],
        other => {
            return Err(Error::config(
                "command",
                format!("{other} writes no output"),
            ))
        }
    })
}

fn output_paths(dir: &Path, cfg: &ScenarioConfig, name: &str, count: usize) -> Vec<PathBuf> {
    let file = cfg.output_name(name);
    if name != "wigner" {
        return vec![dir.join(file)];
    }
    let (stem, ext) = match file.rsplit_once('.') {
        Some((s, e)) => (s.to_string(), format!(".{e}")),
        None => (file, String::new()),
    };
    (0..count)
        .map(|k| dir.join(format!("{stem}_{k}{ext}")))
        .collect()
}

fn run(command: Command) -> Result<()> {
    let name = command.name();
    let args = match command {
        Command::ValidateConfig(c) => {
            let cfg = load(&c)?;
            println!("{}: ok (config_sha256 {})", c.config.display(), cfg.hash());
            return Ok(());
        }
        Command::Spectrum2d(a)
        | Command::Spectrum1d(a)
        | Command::Levels(a)
        | Command::Populations(a)
        | Command::Nominal(a)
        | Command::Eta(a)
        | Command::Wigner(a)
        | Command::Steady(a) => a,
    };
    let cfg = load(&args.config)?;
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(Error::config("--jobs", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    let results = pool.install(|| execute(name, &cfg))?;
    std::fs::create_dir_all(&args.out_dir)?;
    let paths = output_paths(&args.out_dir, &cfg, name, results.len());
    for (path, result) in paths.iter().zip(&results) {
        sweep::write_csv(path, result, &cfg, args.force)?;
        println!("{}", path.display());
    }
    Ok(())
}

/// Runs the CLI on `argv` and returns the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                2
            } else {
                1
            }
        }
    }
}
