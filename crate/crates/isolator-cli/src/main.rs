//! Command-line front end: figure-oriented subcommands over a single
//! TOML configuration, with deterministic CSV/JSON emission.

mod commands;
mod config;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

use config::{Overrides, Resolved, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Simple,
    Rwa,
    Full,
}

impl ModelArg {
    fn name(self) -> &'static str {
        match self {
            ModelArg::Simple => "simple",
            ModelArg::Rwa => "rwa",
            ModelArg::Full => "full",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
}

#[derive(Parser, Debug)]
#[command(
    name = "isolator",
    about = "Coupled-line isolator simulation: adiabatic parametric mode conversion \
             in Josephson transmission lines",
    version
)]
struct Cli {
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides [output] dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Coupled-mode model (overrides [sweep] model).
    #[arg(long, global = true, value_enum)]
    model: Option<ModelArg>,

    /// Frequency grid points (overrides [sweep] grid_points).
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Trajectory/profile sample stride in cells (overrides [output]).
    #[arg(long, global = true)]
    stride: Option<u32>,

    /// Use the linearized dispersion instead of the exact form.
    #[arg(long, global = true)]
    linear_dispersion: bool,

    /// Print the fully resolved configuration as JSON and exit.
    #[arg(long, global = true)]
    params: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print even/odd mode constants and derived quantities as JSON.
    Modes,
    /// Write dispersion curves (exact and linear) as CSV.
    Dispersion,
    /// Write the spatial pump profile and mismatch as CSV.
    Profile,
    /// Solve one frequency and write the trajectory plus a JSON summary.
    Simulate {
        /// Signal frequency in GHz.
        #[arg(long)]
        freq_ghz: f64,
        /// Drive direction.
        #[arg(long, value_enum, default_value = "forward")]
        direction: DirectionArg,
    },
    /// Write the isolation/transmission spectrum and a JSON summary.
    Sweep,
    /// Write the isolation bandwidth for a list of device lengths.
    Lengths {
        /// Comma-separated device lengths in cells.
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<u32>,
        /// Isolation threshold defining the bandwidth.
        #[arg(long, default_value_t = 20.0)]
        threshold_db: f64,
    },
    /// Write adiabaticity traces and estimates for a list of frequencies.
    Adiabatic {
        /// Comma-separated signal frequencies in GHz.
        #[arg(long, value_delimiter = ',', required = true)]
        freqs_ghz: Vec<f64>,
    },
    /// Compare spectra with and without the spatial rotating-wave
    /// reduction.
    CompareRwa,
}

fn run(cli: Cli) -> Result<()> {
    let file_config = RunConfig::load(cli.config.as_deref())?;
    let overrides = Overrides {
        out_dir: cli.out.clone(),
        model: cli.model.map(|m| m.name().to_string()),
        grid: cli.grid,
        stride: cli.stride,
        linear_dispersion: cli.linear_dispersion,
    };
    let resolved: Resolved = config::resolve(&file_config, &overrides)?;

    if cli.params {
        println!("{}", serde_json::to_string_pretty(&resolved.echo)?);
        return Ok(());
    }

    let files = match &cli.command {
        Command::Modes => {
            print!("{}", commands::modes(&resolved)?);
            return Ok(());
        }
        Command::Dispersion => commands::dispersion(&resolved)?,
        Command::Profile => commands::profile(&resolved)?,
        Command::Simulate { freq_ghz, direction } => commands::simulate(
            &resolved,
            *freq_ghz,
            matches!(direction, DirectionArg::Backward),
        )?,
        Command::Sweep => commands::sweep(&resolved)?,
        Command::Lengths {
            lengths,
            threshold_db,
        } => commands::lengths(&resolved, lengths, *threshold_db)?,
        Command::Adiabatic { freqs_ghz } => commands::adiabatic(&resolved, freqs_ghz)?,
        Command::CompareRwa => commands::compare_rwa(&resolved)?,
    };
    let written = emit::write_all(&resolved.out_dir, files)?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
