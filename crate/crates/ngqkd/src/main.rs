use clap::error::ErrorKind;
use clap::Parser;
use ngqkd::cli::Cli;
use ngqkd::{CliError, RunConfig};
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let message = err.kind().to_string();
            let detail = err.to_string();
            let first = detail
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or(&message)
                .trim_start_matches("error: ");
            eprintln!("{}", CliError::config(first).to_line());
            return ExitCode::from(2);
        }
    };

    let outcome = RunConfig::from_cli(&cli).and_then(|config| ngqkd::run(&config));
    match outcome {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(err) => {
            eprintln!("{}", err.to_line());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
