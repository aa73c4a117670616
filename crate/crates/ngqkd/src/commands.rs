//! Execution of each subcommand into a [`Table`].

use crate::config::{CommandName, ModelSpec, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{Cell, Table};
use crate::parallel;
use crate::cli::ModelArg;
use ngqkd_core::boundary::{analytic, Criterion, Solver, TMin, SECURITY_FLOOR, T_FLOOR};
use ngqkd_core::mc::{compare, McConfig};
use ngqkd_core::witness::{ng_boundary_curve, ClickStats, Witness};
use std::fs::File;
use std::io::{self, BufWriter, Write};

/// How a successful run ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A sweep where no grid point satisfies any criterion.
    NothingFeasible,
    /// An MC comparison beyond the allowed distance.
    ValidationFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailed => 1,
            Status::NothingFeasible => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub status: Status,
}

/// Runs `config` and writes the result to its output target.
pub fn run(config: &RunConfig) -> Result<Status> {
    let report = execute(config)?;
    match &config.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            report.table.write(config, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            report.table.write(config, stdout.lock())?;
        }
    }
    Ok(report.status)
}

/// Runs `config` without writing anything.
pub fn execute(config: &RunConfig) -> Result<Report> {
    match config.command {
        CommandName::Sweep => sweep(config),
        CommandName::Point => point(config),
        CommandName::Witness => witness(config),
        CommandName::Tmin => tmin(config),
        CommandName::McValidate => mc_validate(config),
        CommandName::NgCurve => ng_curve(config),
    }
}

fn witness_for(config: &RunConfig) -> Result<Witness> {
    Ok(Witness::new().with_detector_dark_count(config.witness_dark_count)?)
}

fn model_name(spec: &ModelSpec) -> &'static str {
    match spec.model {
        ModelArg::ThermalBath => "thermal-bath",
        ModelArg::NoiseBefore => "noise-before",
        ModelArg::Spdc => "spdc",
    }
}

fn required<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| CliError::config(format!("missing {flag}")))
}

fn sweep(config: &RunConfig) -> Result<Report> {
    let spec = config.model_spec()?;
    let grid = required(config.t_grid, "--t-grid")?.points();
    let criteria: Vec<Criterion> = config.criteria.iter().map(|&c| c.into()).collect();
    let solver = Solver::new(witness_for(config)?);
    let rows = parallel::sweep(&solver, spec, &criteria, &grid)?;

    let mut table = Table::new(vec!["model", "criterion", "T", "mu_max", "feasible"]);
    for row in &rows {
        table.push(vec![
            Cell::text(model_name(spec)),
            Cell::text(row.criterion.name()),
            Cell::Real(row.point.transmittance),
            Cell::Real(row.point.mu_max),
            Cell::Flag(row.point.feasible),
        ]);
    }
    let status = if rows.iter().any(|r| r.point.feasible) {
        Status::Ok
    } else {
        Status::NothingFeasible
    };
    Ok(Report { table, status })
}

fn point(config: &RunConfig) -> Result<Report> {
    let spec = config.model_spec()?;
    let t = required(config.t, "--t")?;
    let model = spec.at(t)?;
    let witness = witness_for(config)?;
    let key = model.key_rate()?;
    let click = model.click_stats()?;
    let omega = model.omega()?;

    let mut table = Table::new(vec![
        "model", "T", "mu", "qber", "y", "delta_i", "p_exp", "P_S", "P_C", "P_none",
        "omega_1", "omega_2+", "secure", "nc", "ng",
    ]);
    table.push(vec![
        Cell::text(model_name(spec)),
        Cell::Real(t),
        Cell::Real(spec.mu),
        Cell::Real(key.qber),
        Cell::Real(key.single_photon_fraction),
        Cell::Real(key.delta_i),
        Cell::Real(key.p_exp),
        Cell::Real(click.p_single),
        Cell::Real(click.p_coincidence),
        Cell::Real(click.p_none),
        Cell::Real(omega.one),
        Cell::Real(omega.two_plus),
        Cell::Flag(key.delta_i > SECURITY_FLOOR),
        Cell::Flag(witness.nonclassical(&click)?),
        Cell::Flag(witness.nongaussian(&click)?),
    ]);
    Ok(Report {
        table,
        status: Status::Ok,
    })
}

fn witness(config: &RunConfig) -> Result<Report> {
    let p_single = required(config.p_single, "--p-single")?;
    let p_coincidence = required(config.p_coincidence, "--p-coincidence")?;
    let p_none = (1.0 - p_single - p_coincidence).max(0.0);
    let stats = ClickStats::new(p_single, p_coincidence, p_none)?;
    let witness = witness_for(config)?;

    let mut table = Table::new(vec!["P_S", "P_C", "nc", "ng"]);
    table.push(vec![
        Cell::Real(p_single),
        Cell::Real(p_coincidence),
        Cell::Flag(witness.nonclassical(&stats)?),
        Cell::Flag(witness.nongaussian(&stats)?),
    ]);
    Ok(Report {
        table,
        status: Status::Ok,
    })
}

fn tmin(config: &RunConfig) -> Result<Report> {
    let spec = config.model_spec()?;
    let solver = Solver::new(Witness::new());
    let numeric = solver.t_min(&spec.at(1.0)?.with_mu(0.0))?;

    let mut table = Table::new(vec!["model", "method", "T_min", "status"]);
    let mut push = |method: &str, value: Option<f64>, status: &str| {
        table.push(vec![
            Cell::text(model_name(spec)),
            Cell::text(method),
            value.map_or(Cell::Missing, Cell::Real),
            Cell::text(status),
        ]);
    };
    match numeric {
        TMin::Found(t) => push("numeric", Some(t), "found"),
        TMin::BelowFloor => push("numeric", Some(T_FLOOR), "below-floor"),
        TMin::Infeasible => push("numeric", None, "infeasible"),
    }
    let analytic_row = |t: f64| {
        if t.is_finite() && t <= 1.0 {
            (Some(t), "found")
        } else {
            (None, "infeasible")
        }
    };
    match spec.model {
        ModelArg::ThermalBath | ModelArg::NoiseBefore => {
            let (v, s) = analytic_row(analytic::t_min_single_photon(spec.p(), spec.e, spec.d));
            push("analytic-single-photon", v, s);
        }
        ModelArg::Spdc => {
            let (v, s) = analytic_row(analytic::t_min_spdc_rare_pairs(spec.e, spec.d));
            push("analytic-rare-pairs", v, s);
            if spec.nu() > 0.0 {
                let (v, s) = analytic_row(analytic::t_min_spdc_rare_darks(spec.e, spec.nu())?);
                push("analytic-rare-darks", v, s);
                let (v, s) = analytic_row(analytic::t_min_ng_spdc(spec.nu()));
                push("analytic-ng", v, s);
            }
        }
    }
    Ok(Report {
        table,
        status: Status::Ok,
    })
}

fn mc_validate(config: &RunConfig) -> Result<Report> {
    let spec = config.model_spec()?;
    let model = spec.at(required(config.t, "--t")?)?;
    let max_sigma = required(config.max_sigma, "--max-sigma")?;
    let mc = McConfig {
        samples: required(config.samples, "--samples")?,
        seed: required(config.seed, "--seed")?,
        ..McConfig::default()
    };
    let tally = parallel::simulate(&model, &mc)?;
    let comparisons = compare(&model, &tally)?;

    let mut table = Table::new(vec![
        "statistic", "analytic", "mc", "std_err", "samples", "sigma_distance", "pass",
    ]);
    let mut all_pass = true;
    for c in &comparisons {
        let pass = c.sigma_distance <= max_sigma;
        all_pass &= pass;
        table.push(vec![
            Cell::text(c.statistic.name()),
            Cell::Real(c.analytic),
            Cell::Real(c.estimate.value),
            Cell::Real(c.estimate.std_err),
            Cell::Count(c.estimate.samples),
            Cell::Real(c.sigma_distance),
            Cell::Flag(pass),
        ]);
    }
    let status = if all_pass {
        Status::Ok
    } else {
        Status::ValidationFailed
    };
    Ok(Report { table, status })
}

fn ng_curve(config: &RunConfig) -> Result<Report> {
    let points = ng_boundary_curve(required(config.points, "--points")?)?;
    let mut table = Table::new(vec!["V", "n_of_V", "P_S", "P_C"]);
    for pt in &points {
        table.push(vec![
            Cell::Real(pt.v),
            Cell::Real(pt.n_of_v),
            Cell::Real(pt.p_single),
            Cell::Real(pt.p_coincidence),
        ]);
    }
    Ok(Report {
        table,
        status: Status::Ok,
    })
}
