use std::process::ExitCode;

use clap::Parser;
use skyvane::cli::{run, Cli, ERROR_EXIT_CODE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(err) => {
            eprintln!("skyvane: {err}");
            ExitCode::from(ERROR_EXIT_CODE)
        }
    }
}
