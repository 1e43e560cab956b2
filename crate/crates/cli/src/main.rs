//! `pfem`: frame transformations, analytic plane waves, FDTD runs and
//! measurement campaigns from JSON configs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pfem::exec::{init_threads, Exec};

use crate::commands::Context;
use crate::error::{CliError, CliResult};
use crate::output::{Format, Sink};

/// Fixed default so that unseeded runs are reproducible.
const DEFAULT_SEED: u64 = 20_240_517;

#[derive(Parser, Debug)]
#[command(name = "pfem", version, about = "Preferred-frame electrodynamics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory; without it results go to stdout.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads; 1 runs the serial kernels.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Seed for randomized points and initial data.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Format of tabular output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Suppress progress and warnings on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Transform events, velocities and wave vectors to a boosted frame.
    Boost,
    /// Sample an analytic plane wave and report its scalar properties.
    Planewave,
    /// Run the FDTD solver with diagnostics and snapshots.
    Simulate,
    /// Measure the lattice dispersion relation and fit alpha.
    Dispersion,
    /// Track a wave packet analytically and/or on the grid.
    Packet,
}

fn execute(cli: &Cli) -> CliResult<()> {
    let Some(path) = &cli.config else {
        return Err(CliError::validation("invalid_config", "--config <PATH> is required"));
    };
    let raw = std::fs::read(path)
        .map_err(|e| CliError::validation("invalid_config", format!("cannot read {}: {e}", path.display())))?;
    if cli.threads == 0 {
        return Err(CliError::validation("invalid_input", "--threads must be >= 1"));
    }
    init_threads(cli.threads);
    let ctx = Context {
        seed: cli.seed,
        threads: cli.threads,
        exec: if cli.threads > 1 { Exec::Parallel } else { Exec::Serial },
        sink: Sink {
            out: cli.out.clone(),
            format: cli.format,
        },
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Boost => commands::boost(&ctx, &raw),
        Command::Planewave => commands::planewave(&ctx, &raw),
        Command::Simulate => commands::simulate(&ctx, &raw),
        Command::Dispersion => commands::dispersion(&ctx, &raw),
        Command::Packet => commands::packet(&ctx, &raw),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            e.class.exit_code()
        }
    }
}
