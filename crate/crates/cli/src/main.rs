//! `pa2`: parse, evaluate, dump, play, solve and verify.

mod commands;
mod interactive;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = commands::Cli::parse();
    match commands::run(cli, &mut std::io::stdin().lock(), &mut std::io::stdout().lock()) {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::USAGE)
        }
    }
}
