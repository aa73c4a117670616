//! Nonclassicality and quantum non-Gaussianity witnesses for light measured
//! by a 50:50 splitter followed by two on/off detectors.
//!
//! A state is flagged when its coincidence probability lies strictly below
//! the boundary value at its single-click probability.

use crate::arrival::ArrivalLaw;
use crate::math::{exp, expm1, log1p, sqrt};
use crate::{Error, Result};
use alloc::vec::Vec;

const SUM_TOL: f64 = 1e-10;

/// Single-click, coincidence and no-click probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickStats {
    pub p_single: f64,
    pub p_coincidence: f64,
    pub p_none: f64,
}

impl ClickStats {
    pub fn new(p_single: f64, p_coincidence: f64, p_none: f64) -> Result<Self> {
        for (name, value) in [
            ("P_S", p_single),
            ("P_C", p_coincidence),
            ("P_none", p_none),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Domain { name, value });
            }
        }
        let total = p_single + p_coincidence + p_none;
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Domain {
                name: "P_S + P_C + P_none",
                value: total,
            });
        }
        Ok(Self {
            p_single,
            p_coincidence,
            p_none,
        })
    }

    pub fn from_law(law: &ArrivalLaw) -> Self {
        Self {
            p_single: law.single_click(),
            p_coincidence: law.coincidence(),
            p_none: law.zero,
        }
    }
}

/// Probabilities that exactly one photon, or at least two, reach the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Omega {
    pub one: f64,
    pub two_plus: f64,
}

impl Omega {
    pub fn from_law(law: &ArrivalLaw) -> Self {
        Self {
            one: law.one,
            two_plus: law.at_least_two,
        }
    }
}

/// Largest coincidence probability compatible with a classical state at the
/// given single-click probability: the smaller root of
/// `P_S = 2 (sqrt(P_C) - P_C)`.
pub fn nc_boundary(p_single: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&p_single) {
        return Err(Error::Domain {
            name: "P_S",
            value: p_single,
        });
    }
    // sqrt(P_C) = (1 - sqrt(1 - 2 P_S)) / 2 = P_S / (1 + sqrt(1 - 2 P_S))
    let root = p_single / (1.0 + sqrt(1.0 - 2.0 * p_single));
    Ok(root * root)
}

/// One point of the Gaussian-mixture family bounding non-Gaussian light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NgBoundaryPoint {
    pub v: f64,
    pub n_of_v: f64,
    pub p_single: f64,
    pub p_coincidence: f64,
}

impl NgBoundaryPoint {
    /// Family member at `V = 1 - eps`.
    pub fn at_eps(eps: f64) -> Self {
        let v = 1.0 - eps;
        let (p_single, p_coincidence) = family(eps);
        Self {
            v,
            n_of_v: n_of_v(v),
            p_single,
            p_coincidence,
        }
    }
}

fn n_of_v(v: f64) -> f64 {
    (1.0 - v * v) * (v + 3.0) / (v * (3.0 * v + 1.0))
}

// Taylor coefficients in eps of the family near V = 1.
const SINGLE_SERIES: [f64; 10] = [
    0.0,
    1.0 / 2.0,
    3.0 / 4.0,
    7.0 / 12.0,
    43.0 / 256.0,
    -1707.0 / 5120.0,
    -24421.0 / 30720.0,
    -1459393.0 / 1290240.0,
    -2375419.0 / 1835008.0,
    -3779706977.0 / 2972712960.0,
];
const COINCIDENCE_SERIES: [f64; 12] = [
    0.0,
    0.0,
    0.0,
    1.0 / 16.0,
    163.0 / 768.0,
    403.0 / 1024.0,
    51001.0 / 92160.0,
    10049.0 / 15360.0,
    6198103.0 / 9175040.0,
    606713627.0 / 990904320.0,
    2004781717.0 / 4246732800.0,
    5385350233.0 / 19818086400.0,
];
const SERIES_BELOW: f64 = 1e-2;

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `(P_S, P_C)` solving
/// `1 - P_S/2 - P_C = R1(V)` and `1 - P_S - P_C = R2(V)` at `V = 1 - eps`.
fn family(eps: f64) -> (f64, f64) {
    if eps < SERIES_BELOW {
        return (horner(&SINGLE_SERIES, eps), horner(&COINCIDENCE_SERIES, eps));
    }
    let v = 1.0 - eps;
    let n = n_of_v(v);
    let half_ln_v = 0.5 * log1p(-eps);
    // ln R1 and ln R2 with (3V + 1) = 4 (1 - 3eps/4) and (3 + V) = 4 (1 - eps/4)
    let a1 = half_ln_v - 0.5 * log1p(-0.75 * eps) - 0.5 * log1p(-0.25 * eps)
        - n / (6.0 + 2.0 * v);
    let a2 = half_ln_v - log1p(-0.5 * eps) - n / (2.0 + 2.0 * v);
    let p_single = 2.0 * exp(a2) * expm1(a1 - a2);
    let p_coincidence = expm1(a2) - 2.0 * expm1(a1);
    (p_single, p_coincidence)
}

/// Samples of the family boundary, sorted by `P_S`.
///
/// The family's `P_S(V)` rises from zero at `V -> 1` to a maximum of about
/// 0.58 and falls again, where `P_C` approaches one. Only the rising branch
/// bounds the Gaussian region from below; the grid covers that branch,
/// logarithmically spaced in `1 - V` so that points accumulate near `V = 1`.
pub fn ng_boundary_curve(num_points: usize) -> Result<Vec<NgBoundaryPoint>> {
    if num_points < 16 {
        return Err(Error::Domain {
            name: "num_points",
            value: num_points as f64,
        });
    }
    let eps_peak = peak_eps();
    let (lo, hi) = (libm::log(EPS_MIN), libm::log(eps_peak));
    let last = (num_points - 1) as f64;
    let points: Vec<NgBoundaryPoint> = (0..num_points)
        .map(|i| {
            let eps = if i + 1 == num_points {
                eps_peak
            } else {
                exp(lo + (hi - lo) * i as f64 / last)
            };
            NgBoundaryPoint::at_eps(eps)
        })
        .filter(|pt| {
            (0.0..=1.0).contains(&pt.p_single) && (0.0..=1.0).contains(&pt.p_coincidence)
        })
        .collect();
    if points.is_empty() {
        return Err(Error::DegenerateCurve);
    }
    Ok(points)
}

const EPS_MIN: f64 = 1e-14;
const DEFAULT_POINTS: usize = 512;

/// `1 - V` at which the family's `P_S` peaks, by golden-section search.
fn peak_eps() -> f64 {
    let ratio = 0.5 * (sqrt(5.0) - 1.0);
    let (mut a, mut b) = (0.2, 0.95);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = family(c).0;
    let mut fd = family(d).0;
    while b - a > 1e-12 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = family(c).0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = family(d).0;
        }
    }
    0.5 * (a + b)
}

/// Tabulated non-Gaussianity boundary with exact refinement on the family.
#[derive(Debug, Clone)]
pub struct NgBoundary {
    eps: Vec<f64>,
    p_single: Vec<f64>,
}

impl Default for NgBoundary {
    fn default() -> Self {
        Self::new()
    }
}

impl NgBoundary {
    pub fn new() -> Self {
        let curve = ng_boundary_curve(DEFAULT_POINTS).unwrap_or_else(|_| unreachable!());
        Self {
            eps: curve.iter().map(|pt| 1.0 - pt.v).collect(),
            p_single: curve.iter().map(|pt| pt.p_single).collect(),
        }
    }

    /// Range of `P_S` covered by the boundary.
    pub fn span(&self) -> (f64, f64) {
        (self.p_single[0], self.p_single[self.p_single.len() - 1])
    }

    /// Boundary coincidence probability at `p_single`.
    pub fn p_coincidence(&self, p_single: f64) -> Result<f64> {
        let (lo, hi) = self.span();
        if !(lo..=hi).contains(&p_single) {
            return Err(Error::OutOfSpan {
                value: p_single,
                lo,
                hi,
            });
        }
        let upper = self.p_single.partition_point(|&ps| ps < p_single);
        if self.p_single[upper] == p_single {
            return Ok(family(self.eps[upper]).1);
        }
        let (mut a, mut b) = (self.eps[upper - 1], self.eps[upper]);
        for _ in 0..200 {
            let mid = sqrt(a * b);
            if mid <= a || mid >= b {
                break;
            }
            if family(mid).0 < p_single {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= 1e-13 * b {
                break;
            }
        }
        Ok(family(sqrt(a * b)).1)
    }

    /// `P_C` strictly below the boundary. Single-click probabilities above
    /// the largest one any Gaussian mixture reaches are non-Gaussian; a state
    /// that never clicks is not.
    pub fn is_nongaussian(&self, stats: &ClickStats) -> Result<bool> {
        if stats.p_single == 0.0 {
            return Ok(false);
        }
        if stats.p_single > self.span().1 {
            return Ok(true);
        }
        Ok(stats.p_coincidence < self.p_coincidence(stats.p_single)?)
    }
}

/// Boundary value of the non-Gaussianity witness at `p_single`.
pub fn ng_boundary(p_single: f64) -> Result<f64> {
    NgBoundary::new().p_coincidence(p_single)
}

/// `P_C` strictly below the classical boundary. Single-click probabilities
/// above 1/2 are out of reach of any classical state.
pub fn is_nonclassical(stats: &ClickStats) -> Result<bool> {
    if stats.p_single > 0.5 {
        return Ok(true);
    }
    Ok(stats.p_coincidence < nc_boundary(stats.p_single)?)
}

pub fn is_nongaussian(stats: &ClickStats) -> Result<bool> {
    NgBoundary::new().is_nongaussian(stats)
}

/// `omega_1^2 / 2 > omega_2+`.
pub fn simplified_nc(omega_one: f64, omega_two_plus: f64) -> bool {
    0.5 * omega_one * omega_one > omega_two_plus
}

/// `omega_1^3 > omega_2+`.
pub fn simplified_ng(omega_one: f64, omega_two_plus: f64) -> bool {
    omega_one * omega_one * omega_one > omega_two_plus
}

/// Statistics seen through detectors that each fire spuriously with
/// probability `d`, independently of the light and of each other.
pub fn apply_detector_darkcounts(stats: &ClickStats, d: f64) -> Result<ClickStats> {
    if !(0.0..1.0).contains(&d) {
        return Err(Error::Domain { name: "d", value: d });
    }
    let ClickStats {
        p_single,
        p_coincidence,
        p_none,
    } = *stats;
    Ok(ClickStats {
        p_single: p_single * (1.0 - d) + 2.0 * p_none * d * (1.0 - d),
        p_coincidence: p_coincidence + p_single * d + p_none * d * d,
        p_none: p_none * (1.0 - d) * (1.0 - d),
    })
}

/// Both witnesses with an optional dark-count model for Bob's detectors.
#[derive(Debug, Clone, Default)]
pub struct Witness {
    ng: NgBoundary,
    detector_dark_count: f64,
}

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_detector_dark_count(mut self, d: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&d) {
            return Err(Error::Domain { name: "d", value: d });
        }
        self.detector_dark_count = d;
        Ok(self)
    }

    pub fn ng_boundary(&self) -> &NgBoundary {
        &self.ng
    }

    fn observed(&self, stats: &ClickStats) -> Result<ClickStats> {
        if self.detector_dark_count == 0.0 {
            Ok(*stats)
        } else {
            apply_detector_darkcounts(stats, self.detector_dark_count)
        }
    }

    pub fn nonclassical(&self, stats: &ClickStats) -> Result<bool> {
        is_nonclassical(&self.observed(stats)?)
    }

    pub fn nongaussian(&self, stats: &ClickStats) -> Result<bool> {
        self.ng.is_nongaussian(&self.observed(stats)?)
    }
}
