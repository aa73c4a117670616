//! Validated run configuration, built from parsed flags.

use crate::cli::{self, CriterionArg, FormatArg, ModelArg, ModelArgs, NoiseArg, OutputArgs};
use crate::error::{CliError, Result};
use ngqkd_core::boundary::Criterion;
use ngqkd_core::noise_before::NoiseBeforeParams;
use ngqkd_core::spdc::SpdcParams;
use ngqkd_core::thermal_bath::ThermalBathParams;
use ngqkd_core::{Model, NoiseKind};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Sweep,
    Point,
    Witness,
    Tmin,
    McValidate,
    NgCurve,
}

/// Model parameters except the transmittance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelSpec {
    pub model: ModelArg,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    pub mu: f64,
    pub e: f64,
    pub d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseArg>,
}

impl ModelSpec {
    fn from_args(args: &ModelArgs) -> Result<Self> {
        let kind = args.model;
        if args.noise.is_some() && kind != ModelArg::NoiseBefore {
            return Err(CliError::config("--noise applies only to --model noise-before"));
        }
        if args.nu.is_some() && kind != ModelArg::Spdc {
            return Err(CliError::config("--nu applies only to --model spdc"));
        }
        if args.p.is_some() && kind == ModelArg::Spdc {
            return Err(CliError::config("--p does not apply to --model spdc; use --nu"));
        }
        let spec = ModelSpec {
            model: kind,
            p: match kind {
                ModelArg::Spdc => None,
                _ => Some(args.p.unwrap_or(1.0)),
            },
            nu: match kind {
                ModelArg::Spdc => Some(
                    args.nu
                        .ok_or_else(|| CliError::config("--model spdc requires --nu"))?,
                ),
                _ => None,
            },
            mu: args.mu,
            e: args.e,
            d: args.d,
            noise: match kind {
                ModelArg::NoiseBefore => Some(args.noise.unwrap_or(NoiseArg::Thermal)),
                _ => None,
            },
        };
        spec.at(1.0)?;
        Ok(spec)
    }

    pub fn p(&self) -> f64 {
        self.p.unwrap_or(1.0)
    }

    pub fn nu(&self) -> f64 {
        self.nu.unwrap_or(0.0)
    }

    /// The model at transmittance `t`.
    pub fn at(&self, t: f64) -> Result<Model> {
        let model = match self.model {
            ModelArg::ThermalBath => Model::ThermalBath(ThermalBathParams::new(
                self.p(),
                t,
                self.mu,
                self.e,
                self.d,
            )?),
            ModelArg::NoiseBefore => {
                let kind = match self.noise {
                    Some(NoiseArg::Poisson) => NoiseKind::Poisson,
                    _ => NoiseKind::Thermal,
                };
                Model::NoiseBefore(NoiseBeforeParams::new(
                    self.p(),
                    t,
                    self.mu,
                    self.e,
                    self.d,
                    kind,
                )?)
            }
            ModelArg::Spdc => {
                Model::Spdc(SpdcParams::new(self.nu(), t, self.mu, self.e, self.d)?)
            }
        };
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Log,
    Linear,
}

/// Transmittance grid `min..=max` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: Scale,
}

impl TGrid {
    pub fn parse(raw: &str) -> Result<Self> {
        let bad = || CliError::config(format!("--t-grid expects min:max:count:log|linear, got {raw:?}"));
        let parts: Vec<&str> = raw.split(':').collect();
        let [min, max, count, scale] = parts.as_slice() else {
            return Err(bad());
        };
        let grid = TGrid {
            min: min.parse().map_err(|_| bad())?,
            max: max.parse().map_err(|_| bad())?,
            count: count.parse().map_err(|_| bad())?,
            scale: match *scale {
                "log" => Scale::Log,
                "linear" => Scale::Linear,
                _ => return Err(bad()),
            },
        };
        if !(grid.min > 0.0 && grid.min < grid.max && grid.max <= 1.0) {
            return Err(CliError::config(format!(
                "--t-grid needs 0 < min < max <= 1, got {raw:?}"
            )));
        }
        if grid.count < 2 {
            return Err(CliError::config("--t-grid count must be at least 2"));
        }
        Ok(grid)
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / last;
                if i + 1 == self.count {
                    return self.max;
                }
                match self.scale {
                    Scale::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                    Scale::Linear => self.min + f * (self.max - self.min),
                }
            })
            .collect()
    }
}

/// Everything a run needs, resolved and checked. Serialised verbatim into
/// the `meta` block of JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<CriterionArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<TGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub witness_dark_count: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_single: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_coincidence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    pub format: FormatArg,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn new(command: CommandName, output: &OutputArgs) -> Self {
        Self {
            command,
            model: None,
            criteria: Vec::new(),
            t_grid: None,
            t: None,
            witness_dark_count: 0.0,
            p_single: None,
            p_coincidence: None,
            samples: None,
            seed: None,
            max_sigma: None,
            points: None,
            format: output.format,
            output: output.output.clone(),
        }
    }

    pub fn from_cli(cli: &cli::Cli) -> Result<Self> {
        use cli::Command;
        let config = match &cli.command {
            Command::Sweep(a) => {
                let mut criteria = a.criteria.clone();
                criteria.sort();
                criteria.dedup();
                if criteria.is_empty() {
                    return Err(CliError::config("--criteria must name at least one criterion"));
                }
                RunConfig {
                    model: Some(ModelSpec::from_args(&a.model)?),
                    criteria,
                    t_grid: Some(TGrid::parse(&a.t_grid)?),
                    witness_dark_count: check_dark(a.witness_dark_count)?,
                    ..Self::new(CommandName::Sweep, &a.output)
                }
            }
            Command::Point(a) => RunConfig {
                model: Some(ModelSpec::from_args(&a.model)?),
                t: Some(check_t(a.t)?),
                witness_dark_count: check_dark(a.witness_dark_count)?,
                ..Self::new(CommandName::Point, &a.output)
            },
            Command::Witness(a) => {
                for (name, v) in [("--p-single", a.p_single), ("--p-coincidence", a.p_coincidence)] {
                    if !(0.0..=1.0).contains(&v) {
                        return Err(CliError::config(format!("{name} must lie in [0, 1]")));
                    }
                }
                if a.p_single + a.p_coincidence > 1.0 + 1e-12 {
                    return Err(CliError::config("--p-single + --p-coincidence exceeds 1"));
                }
                RunConfig {
                    p_single: Some(a.p_single),
                    p_coincidence: Some(a.p_coincidence),
                    witness_dark_count: check_dark(a.witness_dark_count)?,
                    ..Self::new(CommandName::Witness, &a.output)
                }
            }
            Command::Tmin(a) => RunConfig {
                model: Some(ModelSpec::from_args(&a.model)?),
                ..Self::new(CommandName::Tmin, &a.output)
            },
            Command::McValidate(a) => {
                if a.samples == 0 {
                    return Err(CliError::config("--samples must be positive"));
                }
                if a.max_sigma.is_nan() || a.max_sigma <= 0.0 {
                    return Err(CliError::config("--max-sigma must be positive"));
                }
                let model = ModelSpec::from_args(&a.model)?;
                if model.model == ModelArg::Spdc && model.nu() <= 0.0 {
                    return Err(CliError::config("--nu must be positive to simulate heralds"));
                }
                RunConfig {
                    model: Some(model),
                    t: Some(check_t(a.t)?),
                    samples: Some(a.samples),
                    seed: Some(a.seed),
                    max_sigma: Some(a.max_sigma),
                    ..Self::new(CommandName::McValidate, &a.output)
                }
            }
            Command::NgCurve(a) => {
                if a.points < 16 {
                    return Err(CliError::config("--points must be at least 16"));
                }
                RunConfig {
                    points: Some(a.points),
                    ..Self::new(CommandName::NgCurve, &a.output)
                }
            }
        };
        Ok(config)
    }

    pub fn model_spec(&self) -> Result<&ModelSpec> {
        self.model
            .as_ref()
            .ok_or_else(|| CliError::config("this command needs model parameters"))
    }
}

fn check_t(t: f64) -> Result<f64> {
    if t > 0.0 && t <= 1.0 {
        Ok(t)
    } else {
        Err(CliError::config(format!("--t must lie in (0, 1], got {t}")))
    }
}

fn check_dark(d: f64) -> Result<f64> {
    if (0.0..1.0).contains(&d) {
        Ok(d)
    } else {
        Err(CliError::config(format!("--witness-dark-count must lie in [0, 1), got {d}")))
    }
}

impl From<CriterionArg> for Criterion {
    fn from(arg: CriterionArg) -> Self {
        match arg {
            CriterionArg::Security => Criterion::Security,
            CriterionArg::Nc => Criterion::Nonclassical,
            CriterionArg::Ng => Criterion::NonGaussian,
        }
    }
}
