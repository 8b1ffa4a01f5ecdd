use std::process::ExitCode;

use clap::Parser;

use risklab::cli::{dispatch, exit_code, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("risklab: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
