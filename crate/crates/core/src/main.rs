use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = eec_core::cli::Cli::parse();
    ExitCode::from(eec_core::cli::run(cli))
}
