//! `rga-kit`: relative gain arrays, loop pairings and unit audits from the
//! command line.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

mod cli;
mod commands;
mod error;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};

fn run(cli: &Cli) -> error::Result<String> {
    match &cli.command {
        Command::Rga(a) => commands::rga(a),
        Command::Pair(a) => commands::pair(a),
        Command::Audit(a) => commands::audit(a),
        Command::Parse(a) => commands::parse(a),
        Command::Fixtures(c) => commands::fixtures_cmd(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
