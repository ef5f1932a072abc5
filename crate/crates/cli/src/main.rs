mod args;
mod commands;
mod failure;
mod input;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let result = commands::run(&cli);
    if let Err(f) = &result {
        eprintln!("{f}");
    }
    failure::exit_code(&result)
}
