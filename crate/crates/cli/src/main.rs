mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Ok,
    CheckFailed(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::EstimateTau(a) => commands::estimate(spotvol_core::EstimatorKind::Tau, a),
        Command::EstimateSigma(a) => commands::estimate(spotvol_core::EstimatorKind::Sigma, a),
        Command::MiseSweep(a) => commands::mise_sweep(a),
        Command::ReplicateFigure(a) => commands::replicate_figure(a),
        Command::Selfcheck => commands::selfcheck(),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
