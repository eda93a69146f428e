mod cli;
mod commands;
mod config;
mod error;
mod plot;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::config::FileConfig;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = FileConfig::load(cli.config.as_deref()).and_then(|file| {
        let ctx = commands::Context { file, verbose: cli.verbose };
        match cli.command {
            Command::Simulate(args) => commands::simulate::run(&ctx, args),
            Command::Generate(args) => commands::generate::run(&ctx, args),
            Command::Validate(args) => commands::validate::run(&ctx, args),
            Command::Trace(args) => commands::trace::run(&ctx, args),
            Command::Exact(args) => commands::exact::run(&ctx, args),
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ising: {e}");
            e.exit_code()
        }
    }
}
