use std::process::ExitCode;

use clap::Parser;
use sumcol_cli::args::Cli;

fn main() -> ExitCode {
    sumcol_cli::run(Cli::parse())
}
