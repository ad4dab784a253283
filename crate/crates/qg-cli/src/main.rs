use std::process::ExitCode;

use clap::Parser;
use qg_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(&cli, argv) {
        Ok(report) => {
            print!("{}", report.render());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("qg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
