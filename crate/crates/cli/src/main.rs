use std::process::ExitCode;

use clap::Parser;
use xyz_noise_cli::{args::Cli, run, EXIT_ARGUMENT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_ARGUMENT as u8
            } else {
                0
            });
        }
    };
    ExitCode::from(run(cli, &mut std::io::stderr()) as u8)
}
