//! `nlse`: bound, scattering and resonance states of the stationary
//! nonlinear Schrödinger equation with delta and delta-shell potentials.

mod commands;
mod error;
mod output;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use commands::{BoundStateArgs, ShellLinearArgs, ShellScanArgs, TransitionArgs};
use error::CliError;
use output::Report;
use verify::VerifyArgs;

#[derive(Debug, Parser)]
#[command(name = "nlse", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound state of a single delta: summary and ψ(x) table.
    BoundState(BoundStateArgs),
    /// First maximum and norm per period across the critical delta strength (g = −1).
    Transition(TransitionArgs),
    /// S-matrix poles, amplitude ratio and resonance wavefunction of the linear delta shell.
    ShellLinear(ShellLinearArgs),
    /// Nonlinear amplitude-ratio scans with resonance positions and widths.
    ShellScan(ShellScanArgs),
    /// Run the oracle suite.
    Verify(VerifyArgs),
}

fn run(cli: &Cli) -> Result<Option<CliError>, CliError> {
    let (report, failure): (Report, Option<CliError>) = match &cli.command {
        Command::BoundState(a) => commands::bound_state_cmd(a)?,
        Command::Transition(a) => (commands::transition_cmd(a)?, None),
        Command::ShellLinear(a) => (commands::shell_linear_cmd(a)?, None),
        Command::ShellScan(a) => commands::shell_scan_cmd(a)?,
        Command::Verify(a) => verify::verify_cmd(a)?,
    };
    let bytes = match cli.format {
        Format::Csv => report.to_csv().map_err(|e| CliError::Output(e.to_string()))?,
        Format::Json => report.to_json().into_bytes(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(&bytes).map_err(|e| e.to_string()),
    };
    written.map_err(CliError::Output)?;
    Ok(failure)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(e)) | Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
