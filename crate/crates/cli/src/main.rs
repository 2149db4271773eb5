//! Command-line harness: strategy benchmarks, verification suites, the
//! occupancy-board simulator, and SVG plots of the emitted CSVs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/config error,
//! 3 I/O failure.

mod bench;
mod config;
mod plot;
mod simcmd;
mod verifycmd;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "oaprobe",
    version,
    about = "Open-addressing probe-strategy benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run load-factor sweeps over the probing strategies, emitting CSVs.
    Bench(config::BenchArgs),
    /// Run the verification suites (oracle differentials, invariants).
    Verify(verifycmd::VerifyArgs),
    /// Run the adaptive-walk simulator over random occupancy boards.
    Sim(simcmd::SimArgs),
    /// Render a results CSV as an SVG line chart.
    Plot(plot::PlotArgs),
}

/// Command failure with its process exit code.
#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Verification,
    Io(String),
}

impl CmdError {
    fn exit_code(&self) -> u8 {
        match self {
            CmdError::Verification => 1,
            CmdError::Usage(_) => 2,
            CmdError::Io(_) => 3,
        }
    }
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CmdError> {
    std::fs::write(path, contents)
        .map_err(|e| CmdError::Io(format!("writing {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(args) => bench::cmd_bench(&args),
        Command::Verify(args) => verifycmd::cmd_verify(&args),
        Command::Sim(args) => simcmd::cmd_sim(&args),
        Command::Plot(args) => plot::cmd_plot(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CmdError::Usage(msg) => eprintln!("error: {msg}"),
                CmdError::Io(msg) => eprintln!("i/o error: {msg}"),
                CmdError::Verification => {}
            }
            ExitCode::from(err.exit_code())
        }
    }
}
