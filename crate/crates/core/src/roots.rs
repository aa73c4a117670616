//! Bracketed bisection, the only root finder the crate uses.

use crate::{Error, Result};

/// Finds a sign change of `f` in `[lo, hi]` to absolute tolerance `tol`.
///
/// `f(lo)` and `f(hi)` must differ in sign (a zero at either end is returned
/// directly).
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Infeasible("bisection bracket has no sign change"));
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection on a predicate that is `true` at `lo` and `false` at `hi`.
///
/// Returns the final `(lo, hi)` bracket once `hi - lo <= rel_tol * hi`.
/// When `geometric` is set and `lo > 0` the midpoint is taken in log space.
pub fn bisect_predicate<P>(
    mut holds: P,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    geometric: bool,
) -> (f64, f64)
where
    P: FnMut(f64) -> bool,
{
    for _ in 0..400 {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = if geometric && lo > 0.0 {
            libm::sqrt(lo * hi)
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
