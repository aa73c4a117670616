//! Largest tolerable noise `mu_max(T)` for each criterion, the smallest
//! secure transmittance, and the closed-form low-transmittance limits.

use crate::model::Model;
use crate::roots::bisect_predicate;
use crate::witness::Witness;
use crate::Result;
use alloc::vec::Vec;

/// Smallest `mu` probed when bracketing.
pub const MU_START: f64 = 1e-12;
/// Largest noise mean considered.
pub const MU_CEILING: f64 = 1e3;
/// Relative width of the final `mu` and `T` brackets.
pub const REL_TOL: f64 = 1e-6;
/// Secret fractions at or below this count as no key.
pub const SECURITY_FLOOR: f64 = 1e-12;
/// Smallest transmittance searched by [`Solver::t_min`].
pub const T_FLOOR: f64 = 1e-12;

const SCAN_POINTS: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    Security,
    Nonclassical,
    NonGaussian,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Security => "security",
            Criterion::Nonclassical => "nc",
            Criterion::NonGaussian => "ng",
        }
    }
}

/// Outcome of a `mu_max` search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuMax {
    Found(f64),
    /// The criterion fails even without noise.
    Infeasible,
    /// The criterion still holds at [`MU_CEILING`].
    AboveCeiling,
}

impl MuMax {
    pub fn value(self) -> f64 {
        match self {
            MuMax::Found(mu) => mu,
            MuMax::Infeasible => 0.0,
            MuMax::AboveCeiling => MU_CEILING,
        }
    }

    pub fn is_feasible(self) -> bool {
        !matches!(self, MuMax::Infeasible)
    }
}

/// Outcome of a minimal-transmittance search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TMin {
    Found(f64),
    /// Secure down to [`T_FLOOR`].
    BelowFloor,
    /// Not secure even at `T = 1`.
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub transmittance: f64,
    pub mu_max: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    /// Parameters held fixed along the sweep; its `T` and `mu` are placeholders.
    pub model: Model,
    pub criterion: Criterion,
    pub points: Vec<BoundaryPoint>,
}

/// Criterion evaluation against a shared witness.
#[derive(Debug, Clone, Default)]
pub struct Solver {
    witness: Witness,
}

impl Solver {
    pub fn new(witness: Witness) -> Self {
        Self { witness }
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    /// Whether `model` satisfies `criterion`. Undefined statistics (no
    /// clicks at all) count as failing.
    pub fn holds(&self, model: &Model, criterion: Criterion) -> bool {
        let outcome = match criterion {
            Criterion::Security => model.key_rate().map(|k| k.delta_i > SECURITY_FLOOR),
            Criterion::Nonclassical => model
                .click_stats()
                .and_then(|s| self.witness.nonclassical(&s)),
            Criterion::NonGaussian => model
                .click_stats()
                .and_then(|s| self.witness.nongaussian(&s)),
        };
        outcome.unwrap_or(false)
    }

    /// Largest `mu` at which `criterion` holds for `model` at transmittance `t`.
    pub fn mu_max(&self, model: &Model, criterion: Criterion, t: f64) -> Result<MuMax> {
        let base = model.with_transmittance(t);
        base.with_mu(0.0).validate()?;
        let holds = |mu: f64| self.holds(&base.with_mu(mu), criterion);
        if !holds(0.0) {
            return Ok(MuMax::Infeasible);
        }

        let (mut lo, mut hi) = (0.0, MU_START);
        while holds(hi) {
            if hi >= MU_CEILING {
                return Ok(MuMax::AboveCeiling);
            }
            lo = hi;
            hi = (2.0 * hi).min(MU_CEILING);
        }

        let probes_hold = [0.25, 0.5, 0.75].iter().all(|&f| holds(f * lo));
        if !probes_hold {
            log::warn!(
                "{} criterion not monotone in mu at T = {t:e}; using dense scan",
                criterion.name()
            );
            return Ok(self.scan(&holds));
        }
        let (lo, _) = bisect_predicate(&holds, lo, hi, REL_TOL, lo > 0.0);
        Ok(MuMax::Found(lo))
    }

    /// Largest holding point of a logarithmic scan, refined against the
    /// next scan point.
    fn scan<F: Fn(f64) -> bool>(&self, holds: &F) -> MuMax {
        let (a, b) = (libm::log(MU_START), libm::log(MU_CEILING));
        let grid = |i: usize| libm::exp(a + (b - a) * i as f64 / (SCAN_POINTS - 1) as f64);
        match (0..SCAN_POINTS).rev().find(|&i| holds(grid(i))) {
            None => MuMax::Found(0.0),
            Some(i) if i + 1 == SCAN_POINTS => MuMax::AboveCeiling,
            Some(i) => {
                let (lo, _) = bisect_predicate(holds, grid(i), grid(i + 1), REL_TOL, true);
                MuMax::Found(lo)
            }
        }
    }

    pub fn sweep(&self, model: &Model, criterion: Criterion, grid: &[f64]) -> Result<BoundaryCurve> {
        let points = grid
            .iter()
            .map(|&t| {
                let outcome = self.mu_max(model, criterion, t)?;
                Ok(BoundaryPoint {
                    transmittance: t,
                    mu_max: outcome.value(),
                    feasible: outcome.is_feasible(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundaryCurve {
            model: *model,
            criterion,
            points,
        })
    }

    /// Smallest transmittance with a positive secret fraction at `mu = 0`.
    pub fn t_min(&self, model: &Model) -> Result<TMin> {
        let quiet = model.with_mu(0.0);
        quiet.with_transmittance(1.0).validate()?;
        let secure = |t: f64| self.holds(&quiet.with_transmittance(t), Criterion::Security);
        if !secure(1.0) {
            return Ok(TMin::Infeasible);
        }
        if secure(T_FLOOR) {
            return Ok(TMin::BelowFloor);
        }
        let (_, hi) = bisect_predicate(|t| !secure(t), T_FLOOR, 1.0, REL_TOL, true);
        Ok(TMin::Found(hi))
    }
}

pub fn mu_max_numeric(model: &Model, criterion: Criterion, t: f64) -> Result<MuMax> {
    Solver::default().mu_max(model, criterion, t)
}

pub fn sweep(model: &Model, criterion: Criterion, grid: &[f64]) -> Result<BoundaryCurve> {
    Solver::default().sweep(model, criterion, grid)
}

pub fn t_min_numeric(model: &Model) -> Result<TMin> {
    Solver::default().t_min(model)
}

/// Low-transmittance approximations. Each is valid only in the regime named
/// in its doc comment.
pub mod analytic {
    use crate::security::{qber_threshold, y_threshold};
    use crate::Result;
    use core::f64::consts::SQRT_2;

    fn security_slope(e: f64) -> f64 {
        let q = qber_threshold();
        ((2.0 * q - e) / (1.0 - 2.0 * q)).max(0.0)
    }

    /// Thermal bath, `T << 1`, `d = 0`.
    pub fn mu_max_qkd_thermal_bath(p: f64, e: f64, t: f64) -> f64 {
        0.5 * p * security_slope(e) * t
    }

    /// Noise before the channel, `T << 1`, `d = 0`.
    pub fn mu_max_qkd_noise_before(p: f64, e: f64) -> f64 {
        p * security_slope(e)
    }

    /// Heralded source, `nu << T << 1`, `d = 0`.
    pub fn mu_max_qkd_spdc(e: f64, t: f64) -> f64 {
        0.5 * security_slope(e) * t
    }

    pub fn mu_max_nc_thermal_bath(p: f64, t: f64) -> f64 {
        p * t / SQRT_2
    }

    pub fn mu_max_ng_thermal_bath(p: f64, t: f64) -> f64 {
        0.5 * p * p * t * t
    }

    pub fn mu_max_nc_noise_before(p: f64) -> f64 {
        p
    }

    pub fn mu_max_ng_noise_before(p: f64, t: f64) -> f64 {
        p * p * t
    }

    pub fn mu_max_nc_spdc(t: f64) -> f64 {
        t / SQRT_2
    }

    pub fn mu_max_ng_spdc(t: f64) -> f64 {
        0.5 * t * t
    }

    /// Either single-photon model, `T << 1`, `mu << d`. Infinite when the
    /// depolarisation alone exceeds the threshold.
    pub fn t_min_single_photon(p: f64, e: f64, d: f64) -> f64 {
        let q = qber_threshold();
        let margin = q - 0.5 * e;
        if margin <= 0.0 {
            return f64::INFINITY;
        }
        d * (1.0 - 2.0 * q) / (p * margin)
    }

    /// Heralded source with `nu << d`.
    pub fn t_min_spdc_rare_pairs(e: f64, d: f64) -> f64 {
        t_min_single_photon(1.0, e, d)
    }

    /// Heralded source with `d << nu`.
    pub fn t_min_spdc_rare_darks(e: f64, nu: f64) -> Result<f64> {
        Ok(nu / (2.0 * (1.0 - y_threshold(e)?)))
    }

    /// Heralded source at `mu -> 0`: smallest `T` with non-Gaussian light.
    pub fn t_min_ng_spdc(nu: f64) -> f64 {
        0.5 * nu
    }
}
