//! Command-line front end for the `gaugeframe` kernels.
//!
//! Configurations are JSON documents describing a four-dimensional grid and
//! the fields sampled on it. Field subcommands build finite-difference jets,
//! evaluate the library kernels at every point and emit one record per point
//! as JSON or CSV. The `verify` subcommand runs seeded randomized suites over
//! the library and prints a pass/fail table.

pub mod config;
pub mod error;
pub mod grid;
pub mod pipeline;
pub mod report;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::error::CliError;
use crate::pipeline::Algebra;
use crate::report::Format;

/// Exit code of a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code when a verification suite fails.
pub const EXIT_VERIFY_FAILED: i32 = 1;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "gaugeframe", version, about = "Tetrad gauge-field kernels on gridded data")]
pub struct Cli {
    /// Subcommand to run.
    #[command(subcommand)]
    pub command: Command,
    /// Configuration file (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format of the field subcommands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed of the verification suites.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Tolerance replacing the default of every residual suite.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Factor applied to every grid spacing.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub h_scale: f64,
}

/// Available subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the randomized verification suites.
    Verify,
    /// Solve for the gravitational potential at every point.
    SolveGravity,
    /// Curvature forms, Ricci tensor, scalar curvature and torsion.
    Curvature,
    /// Moments of the state tensor.
    Moments,
    /// Electromagnetic specialization for a U(1) internal group.
    Em,
    /// Residuals of the field equations and conservation laws.
    Residuals,
}

/// Runs a parsed command line, writing the result to its destination.
///
/// Returns the process exit code for a completed run; input problems are
/// reported as errors.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let config = match &cli.config {
        Some(path) => Some(load_config(path, cli.h_scale)?),
        None => None,
    };
    let mut buffer = Vec::new();
    let code = execute(cli, config.as_ref(), &mut buffer)?;
    match &cli.output {
        Some(path) => fs::write(path, &buffer)?,
        None => std::io::stdout().lock().write_all(&buffer)?,
    }
    Ok(code)
}

/// Reads a configuration file and applies the spacing factor.
pub fn load_config(path: &std::path::Path, h_scale: f64) -> Result<Config, CliError> {
    if !(h_scale.is_finite() && h_scale > 0.0) {
        return Err(CliError::InvalidField {
            field: "--h-scale".to_string(),
            reason: format!("must be a positive number, got {h_scale}"),
        });
    }
    let text = fs::read_to_string(path)?;
    let mut config = Config::from_json(&text)?;
    if let Some(grid) = &config.grid {
        config.grid = Some(grid.scaled(h_scale));
    }
    Ok(config)
}

/// Runs a command against an already loaded configuration.
pub fn execute(cli: &Cli, config: Option<&Config>, out: &mut dyn Write) -> Result<i32, CliError> {
    if cli.command == Command::Verify {
        let mut opts = verify::VerifyOptions {
            seed: cli.seed,
            tolerance: cli.tolerance,
            ..Default::default()
        };
        if let Some(cfg) = config {
            opts.overrides = cfg.tolerances.clone();
            opts.group = cfg.group.clone();
        }
        let results = verify::run(&opts);
        out.write_all(verify::render(&results, cli.seed).as_bytes())?;
        let ok = results.iter().all(verify::SuiteResult::passed);
        return Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED });
    }
    let cfg = config.ok_or_else(|| CliError::MissingField("--config".to_string()))?;
    let alg = Algebra::new();
    let report = match cli.command {
        Command::SolveGravity => pipeline::run_solve_gravity(cfg, &alg)?,
        Command::Curvature => pipeline::run_curvature(cfg, &alg)?,
        Command::Moments => pipeline::run_moments(cfg, &alg)?,
        Command::Em => pipeline::run_em(cfg, &alg)?,
        Command::Residuals => pipeline::run_residuals(cfg, &alg)?,
        Command::Verify => unreachable!("handled above"),
    };
    report.write(cli.format, out)?;
    Ok(EXIT_OK)
}
