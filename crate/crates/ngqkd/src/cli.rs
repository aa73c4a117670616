//! Command-line surface. Everything here is raw user input; [`crate::config`]
//! turns it into a validated [`crate::config::RunConfig`].

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "ngqkd",
    version,
    about = "Security, nonclassicality and non-Gaussianity boundaries for DV-QKD over noisy channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// mu_max(T) for each criterion over a transmittance grid.
    Sweep(SweepArgs),
    /// Every statistic and witness flag at one parameter point.
    Point(PointArgs),
    /// Classify a measured (P_S, P_C) pair.
    Witness(WitnessArgs),
    /// Numeric and analytic minimal secure transmittance.
    Tmin(TminArgs),
    /// Closed-form statistics against a Monte Carlo simulation.
    McValidate(McArgs),
    /// Tabulate the non-Gaussianity boundary family.
    NgCurve(NgCurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    ThermalBath,
    NoiseBefore,
    Spdc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseArg {
    Thermal,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionArg {
    Security,
    Nc,
    Ng,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatArg {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "thermal-bath")]
    pub model: ModelArg,
    /// Emission probability of the single-photon source.
    #[arg(long)]
    pub p: Option<f64>,
    /// Mean pairs per pump pulse of the heralded source.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Mean noise photons per pulse.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Depolarisation probability.
    #[arg(long, default_value_t = 0.0)]
    pub e: f64,
    /// Dark-count probability per gate.
    #[arg(long, default_value_t = 0.0)]
    pub d: f64,
    /// Photon statistics of the noise source (noise-before only).
    #[arg(long, value_enum)]
    pub noise: Option<NoiseArg>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "security,nc,ng")]
    pub criteria: Vec<CriterionArg>,
    /// `min:max:count:log|linear`
    #[arg(long, default_value = "1e-4:1:60:log")]
    pub t_grid: String,
    /// Dark-count probability of the detectors used for the witnesses.
    #[arg(long, default_value_t = 0.0)]
    pub witness_dark_count: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Channel transmittance.
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0)]
    pub witness_dark_count: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub p_single: f64,
    #[arg(long)]
    pub p_coincidence: f64,
    #[arg(long, default_value_t = 0.0)]
    pub witness_dark_count: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TminArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Channel transmittance.
    #[arg(long, default_value_t = 0.3)]
    pub t: f64,
    /// Number of simulated pulses; scientific notation such as `1e6` is accepted.
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest accepted distance in standard errors.
    #[arg(long, default_value_t = 4.0)]
    pub max_sigma: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NgCurveArgs {
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_count(raw: &str) -> Result<u64, String> {
    if let Ok(n) = raw.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = raw.parse().map_err(|_| format!("not a count: {raw}"))?;
    if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(format!("not a whole non-negative count: {raw}"))
    }
}
