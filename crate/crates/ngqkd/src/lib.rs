//! Command-line front end for `ngqkd-core`: flag parsing, parallel sweeps and
//! Monte Carlo runs, CSV and JSON output.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

pub use commands::{execute, run, Report, Status};
pub use config::RunConfig;
pub use error::{CliError, Result};
