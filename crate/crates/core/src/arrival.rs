//! Distribution of the number of photons reaching the receiver, summarised by
//! the handful of quantities the autocorrelation statistics need.
//!
//! Near the witness boundaries the coincidence probability and the
//! multi-photon probability are orders of magnitude below the single-click
//! probability, so `1 - P_S - P_none` cannot be formed directly. Every field
//! here is a sum of non-negative terms and composes without subtraction of
//! comparable numbers.

use crate::math::{exp, exp_m1_minus_x, expm1};
use crate::photon_stats::{NoiseKind, PhotonDistribution};

/// Summary of a law on photon numbers `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalLaw {
    /// `P(m = 0)`
    pub zero: f64,
    /// `P(m = 1)`
    pub one: f64,
    /// `P(m >= 1)`
    pub at_least_one: f64,
    /// `P(m >= 2)`
    pub at_least_two: f64,
    /// `E[2^-m; m >= 1]`
    pub half_weight_ge1: f64,
    /// `E[2^-m; m >= 2]`
    pub half_weight_ge2: f64,
}

impl ArrivalLaw {
    pub fn vacuum() -> Self {
        Self::bernoulli(0.0)
    }

    /// Zero or one photon, the latter with probability `r`.
    pub fn bernoulli(r: f64) -> Self {
        Self {
            zero: 1.0 - r,
            one: r,
            at_least_one: r,
            at_least_two: 0.0,
            half_weight_ge1: 0.5 * r,
            half_weight_ge2: 0.0,
        }
    }

    pub fn from_distribution(dist: &PhotonDistribution) -> Self {
        match dist.kind() {
            NoiseKind::Thermal => Self::thermal(dist.mean()),
            NoiseKind::Poisson => Self::poisson(dist.mean()),
        }
    }

    fn thermal(b: f64) -> Self {
        let z = 1.0 / (1.0 + b);
        let q = b / (1.0 + b);
        let hq = 0.5 * q;
        Self {
            zero: z,
            one: z * q,
            at_least_one: q,
            at_least_two: q * q,
            half_weight_ge1: z * hq / (1.0 - hq),
            half_weight_ge2: z * hq * hq / (1.0 - hq),
        }
    }

    fn poisson(b: f64) -> Self {
        let z = exp(-b);
        Self {
            zero: z,
            one: b * z,
            at_least_one: -expm1(-b),
            at_least_two: z * exp_m1_minus_x(b),
            half_weight_ge1: z * expm1(0.5 * b),
            half_weight_ge2: z * exp_m1_minus_x(0.5 * b),
        }
    }

    /// Photons surviving a channel of transmittance `T` from a Poisson pair
    /// source of mean `nu`, conditioned on the idler being heralded (at least
    /// one pair emitted).
    pub fn heralded_poisson(nu: f64, transmittance: f64) -> Self {
        let herald = -expm1(-nu);
        let arriving = Self::poisson(nu * transmittance);
        // No photon arrives but the pulse was heralded: all pairs were lost.
        let zero = exp(-nu * transmittance) * -expm1(-nu * (1.0 - transmittance));
        Self {
            zero: zero / herald,
            one: arriving.one / herald,
            at_least_one: arriving.at_least_one / herald,
            at_least_two: arriving.at_least_two / herald,
            half_weight_ge1: arriving.half_weight_ge1 / herald,
            half_weight_ge2: arriving.half_weight_ge2 / herald,
        }
    }

    /// `E[2^-m]`.
    pub fn half_weight(&self) -> f64 {
        self.zero + self.half_weight_ge1
    }

    /// Law of the sum of two independent photon numbers.
    pub fn compose(&self, other: &Self) -> Self {
        let (x, y) = (self, other);
        Self {
            zero: x.zero * y.zero,
            one: x.zero * y.one + x.one * y.zero,
            at_least_one: x.at_least_one + x.zero * y.at_least_one,
            at_least_two: x.at_least_two + x.one * y.at_least_one + x.zero * y.at_least_two,
            half_weight_ge1: x.half_weight_ge1 * y.half_weight() + x.zero * y.half_weight_ge1,
            half_weight_ge2: x.half_weight_ge2 * y.half_weight()
                + 0.5 * x.one * y.half_weight_ge1
                + x.zero * y.half_weight_ge2,
        }
    }

    /// Exactly one of two detectors behind a 50:50 splitter clicks.
    pub fn single_click(&self) -> f64 {
        2.0 * self.half_weight_ge1
    }

    /// Both detectors click: `sum_{m>=2} P(m) (1 - 2^(1-m))`.
    pub fn coincidence(&self) -> f64 {
        self.at_least_two - 2.0 * self.half_weight_ge2
    }
}
