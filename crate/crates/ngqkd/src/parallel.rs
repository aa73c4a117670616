//! Multi-threaded drivers over the core crate's serial building blocks.
//! Results do not depend on the number of worker threads.

use crate::config::ModelSpec;
use crate::error::Result;
use ngqkd_core::boundary::{BoundaryPoint, Criterion, Solver};
use ngqkd_core::mc::{simulate_block, McConfig, Tally};
use ngqkd_core::Model;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub criterion: Criterion,
    pub point: BoundaryPoint,
}

/// `mu_max` for every `(criterion, T)` pair, sorted by criterion then `T`.
pub fn sweep(
    solver: &Solver,
    spec: &ModelSpec,
    criteria: &[Criterion],
    grid: &[f64],
) -> Result<Vec<SweepRow>> {
    let tasks: Vec<(Criterion, f64)> = criteria
        .iter()
        .flat_map(|&c| grid.iter().map(move |&t| (c, t)))
        .collect();
    let mut rows = tasks
        .par_iter()
        .map(|&(criterion, t)| {
            let model = spec.at(t)?;
            let outcome = solver.mu_max(&model, criterion, t)?;
            Ok(SweepRow {
                criterion,
                point: BoundaryPoint {
                    transmittance: t,
                    mu_max: outcome.value(),
                    feasible: outcome.is_feasible(),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        a.criterion
            .cmp(&b.criterion)
            .then(a.point.transmittance.total_cmp(&b.point.transmittance))
    });
    Ok(rows)
}

/// All Monte Carlo blocks of `config`, spread over the thread pool.
pub fn simulate(model: &Model, config: &McConfig) -> Result<Tally> {
    let tallies = (0..config.blocks())
        .into_par_iter()
        .map(|block| simulate_block(model, config, block))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut total = Tally::default();
    for tally in &tallies {
        total.merge(tally);
    }
    Ok(total)
}
