//! `gauge-rabi`: reduce double-well potentials to two-level systems and
//! probe the gauge structure of the resulting light-matter models.
//!
//! Exit codes: 0 success, 2 config error, 3 numeric/solver error,
//! 4 io/data error.

mod commands;
mod config;
mod csvio;
mod error;
mod manifest;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use gauge_rabi_core::analysis::AnalysisOptions;

use crate::commands::{
    cmd_converge, cmd_cutoff, cmd_gauge_check, cmd_plot, cmd_reduce, cmd_spectrum, cmd_sweep,
    Context,
};
use crate::config::RunConfig;
use crate::error::CliError;

const MAX_DIM_ENV: &str = "GAUGE_RABI_MAX_DIM";

#[derive(Parser)]
#[command(
    name = "gauge-rabi",
    about = "Two-level reduction and gauge-invariant Rabi models by exact diagonalization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Parser)]
struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write JSON mirrors of CSV artifacts.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the potential and reduce the lowest doublet to TLS parameters.
    Reduce(CommonArgs),
    /// Lowest eigenvalues at the configured Fock truncation.
    Spectrum(CommonArgs),
    /// Cross-gauge deviation table over a coupling grid.
    GaugeCheck(CommonArgs),
    /// Beyond-dipole coupling cutoff over a wavevector grid.
    Cutoff(CommonArgs),
    /// Fock-truncation convergence ladder.
    Converge(CommonArgs),
    /// Generic parameter sweep (levels, deviation or coupling metric).
    Sweep(CommonArgs),
    /// Render a CSV table as an SVG line plot.
    Plot(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Reduce(a)
            | Command::Spectrum(a)
            | Command::GaugeCheck(a)
            | Command::Cutoff(a)
            | Command::Converge(a)
            | Command::Sweep(a)
            | Command::Plot(a) => a,
        }
    }
}

fn analysis_options() -> Result<AnalysisOptions, CliError> {
    let mut opts = AnalysisOptions::default();
    if let Ok(raw) = std::env::var(MAX_DIM_ENV) {
        let cap: usize = raw.parse().map_err(|_| {
            CliError::Config(format!("{MAX_DIM_ENV} must be a positive integer, got `{raw}`"))
        })?;
        if cap < 8 {
            return Err(CliError::Config(format!(
                "{MAX_DIM_ENV} must be at least 8, got {cap}"
            )));
        }
        opts.dim_cap = cap;
    }
    Ok(opts)
}

fn run(cli: Cli) -> Result<usize, CliError> {
    let args = cli.command.args().clone();
    let config = RunConfig::load(&args.config)?;
    let out_dir = args
        .out
        .or_else(|| config.output.as_ref().and_then(|o| o.dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"));
    let json_mirror = args.json || config.output.as_ref().map(|o| o.json).unwrap_or(false);
    let ctx = Context {
        config,
        out_dir,
        json_mirror,
        analysis: analysis_options()?,
        started: Instant::now(),
    };
    let outcome = match &cli.command {
        Command::Reduce(_) => cmd_reduce(&ctx),
        Command::Spectrum(_) => cmd_spectrum(&ctx),
        Command::GaugeCheck(_) => cmd_gauge_check(&ctx),
        Command::Cutoff(_) => cmd_cutoff(&ctx),
        Command::Converge(_) => cmd_converge(&ctx),
        Command::Sweep(_) => cmd_sweep(&ctx),
        Command::Plot(_) => cmd_plot(&ctx),
    }?;
    Ok(outcome.warnings)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(_warnings) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
