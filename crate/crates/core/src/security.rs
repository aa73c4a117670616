//! Secret-fraction bounds for BB84 and the thresholds shared by all models.

use crate::error::check_probability;
use crate::math::log;
use crate::roots::bisect;
use crate::{Error, Result};

const ROOT_TOL: f64 = 1e-9;

/// Per-point security figures: QBER, single-photon click fraction, accepted
/// event probability and the secret-fraction bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyRateResult {
    pub qber: f64,
    pub single_photon_fraction: f64,
    pub p_exp: f64,
    /// Secret bits per raw-key bit.
    pub delta_i: f64,
}

/// Shannon entropy in bits, `H(0) = H(1) = 0`.
pub fn binary_entropy(q: f64) -> Result<f64> {
    check_probability("q", q)?;
    Ok(entropy(q))
}

fn entropy(q: f64) -> f64 {
    if q <= 0.0 || q >= 1.0 {
        return 0.0;
    }
    -(q * log(q) + (1.0 - q) * log(1.0 - q)) / core::f64::consts::LN_2
}

/// `max[0, 1 - 2 H(Q)]`, the bound for a source without multi-photon pulses.
pub fn secret_fraction_ideal(qber: f64) -> f64 {
    (1.0 - 2.0 * entropy(qber)).max(0.0)
}

/// `max[0, y - H(Q) - y H(Q / y)]` where `y` is the fraction of clicks caused
/// by genuine single-photon pulses. `Q > y` yields no key.
pub fn secret_fraction_multiphoton(qber: f64, single_photon_fraction: f64) -> f64 {
    let y = single_photon_fraction;
    if y <= 0.0 || qber > y {
        return 0.0;
    }
    (y - entropy(qber) - y * entropy(qber / y)).max(0.0)
}

/// QBER at which `1 - 2 H(Q)` vanishes (about 11%).
pub fn qber_threshold() -> f64 {
    bisect(|q| 1.0 - 2.0 * entropy(q), 1e-3, 0.499, ROOT_TOL).unwrap_or(f64::NAN)
}

/// Smallest single-photon fraction that still gives key when the only
/// errors come from depolarisation `e`:
/// root of `y [1 - H(e / (2y))] - H(e / 2) = 0` on `(e/2, 1]`.
///
/// Returns `0` for `e = 0`, the limit of the degenerate equation `y = 0`.
pub fn y_threshold(e: f64) -> Result<f64> {
    check_probability("e", e)?;
    if e == 0.0 {
        return Ok(0.0);
    }
    let half = 0.5 * e;
    let h = entropy(half);
    let f = |y: f64| y * (1.0 - entropy(half / y)) - h;
    if f(1.0) <= 0.0 {
        return Err(Error::Infeasible("depolarisation too strong for any single-photon fraction"));
    }
    bisect(f, half, 1.0, ROOT_TOL)
}
