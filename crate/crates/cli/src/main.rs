use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use eqas_cli::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match eqas_cli::run(Cli::parse()) {
        Ok(lines) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe (e.g. `| head`) is not a failure
            for line in lines {
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
