//! Photon-number laws and the loss / beam-splitter kernels shared by the
//! channel models.
//!
//! Two evaluation routes exist for every infinite sum:
//!
//! * closed forms through the generating function of the law (thinning a
//!   thermal or Poisson law by a loss `T` gives the same law with mean scaled
//!   by `T`), used by the models;
//! * literal truncated series driven by [`SeriesPolicy`], kept as an
//!   independent route and exercised against the closed forms in tests.

use crate::error::{check_nonnegative, check_probability};
use crate::math::{binomial_pmf, exp, expm1, lgamma, log, log1p, powi};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// Single-mode Bose-Einstein law `mu^n / (1 + mu)^(n + 1)`.
    Thermal,
    /// `e^-mu mu^n / n!`.
    Poisson,
}

/// Photon-number law of a source with a given mean number of photons per pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonDistribution {
    kind: NoiseKind,
    mean: f64,
}

/// Truncation rule for the literal series route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    abs_tail_tol: f64,
    max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            abs_tail_tol: 1e-14,
            max_terms: 4096,
        }
    }
}

impl SeriesPolicy {
    pub fn new(abs_tail_tol: f64, max_terms: usize) -> Result<Self> {
        if abs_tail_tol.is_nan() || abs_tail_tol <= 0.0 {
            return Err(Error::Domain {
                name: "abs_tail_tol",
                value: abs_tail_tol,
            });
        }
        if max_terms < 16 {
            return Err(Error::Domain {
                name: "max_terms",
                value: max_terms as f64,
            });
        }
        Ok(Self {
            abs_tail_tol,
            max_terms,
        })
    }

    pub fn abs_tail_tol(&self) -> f64 {
        self.abs_tail_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl PhotonDistribution {
    pub fn new(kind: NoiseKind, mean: f64) -> Result<Self> {
        check_nonnegative("mean", mean)?;
        Ok(Self { kind, mean })
    }

    pub fn thermal(mean: f64) -> Result<Self> {
        Self::new(NoiseKind::Thermal, mean)
    }

    pub fn poisson(mean: f64) -> Result<Self> {
        Self::new(NoiseKind::Poisson, mean)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Probability of exactly `n` photons, evaluated in log space.
    pub fn pmf(&self, n: u32) -> f64 {
        let mu = self.mean;
        if mu == 0.0 {
            return if n == 0 { 1.0 } else { 0.0 };
        }
        let nf = f64::from(n);
        match self.kind {
            NoiseKind::Thermal => {
                let ln1p = log1p(mu);
                exp(nf * (log(mu) - ln1p) - ln1p)
            }
            NoiseKind::Poisson => exp(-mu + nf * log(mu) - lgamma(nf + 1.0)),
        }
    }

    /// The law after every photon independently survives with probability `keep`.
    pub fn thinned(&self, keep: f64) -> Self {
        Self {
            kind: self.kind,
            mean: self.mean * keep,
        }
    }

    /// Generating function `sum_n p_n z^n` for `z` in `[0, 1]`.
    pub fn pgf(&self, z: f64) -> f64 {
        let y = self.mean * (1.0 - z);
        match self.kind {
            NoiseKind::Thermal => 1.0 / (1.0 + y),
            NoiseKind::Poisson => exp(-y),
        }
    }

    /// `sum_i p_i r_i(T)`: probability that a noise pulse loses all but at
    /// least one photon on a channel of transmittance `T` and the survivors
    /// all land on one given detector of a polarizing splitter, averaged over
    /// a uniformly random noise polarization.
    pub fn same_detector_mass(&self, transmittance: f64) -> f64 {
        let b = self.mean * transmittance;
        if b == 0.0 {
            return 0.0;
        }
        match self.kind {
            // ln(1 + b)/b - 1/(1 + b) = sum_k (-1)^(k+1) k b^k / (k + 1)
            NoiseKind::Thermal if b < 1e-2 => {
                let mut sum = 0.0;
                let mut pow = 1.0;
                for k in 1..=14 {
                    pow *= -b;
                    let kf = f64::from(k);
                    sum -= kf * pow / (kf + 1.0);
                }
                sum
            }
            NoiseKind::Thermal => log1p(b) / b - 1.0 / (1.0 + b),
            // (1 - e^-b)/b - e^-b = sum_k (-1)^(k+1) k b^k / (k + 1)!
            NoiseKind::Poisson if b < 1e-1 => {
                let mut sum = 0.0;
                let mut term = 1.0;
                for k in 1..=18 {
                    let kf = f64::from(k);
                    term *= -b / (kf + 1.0);
                    sum -= kf * term;
                }
                sum
            }
            NoiseKind::Poisson => -expm1(-b) / b - exp(-b),
        }
    }

    /// Upper bound on `sum_{n > last} p_n` given `p_last = pmf(last)`.
    fn tail_after(&self, last: u32, p_last: f64) -> f64 {
        let mu = self.mean;
        if mu == 0.0 {
            return 0.0;
        }
        match self.kind {
            NoiseKind::Thermal => {
                // exact geometric tail: q^(last + 1)
                let q = mu / (1.0 + mu);
                exp(f64::from(last + 1) * log(q))
            }
            NoiseKind::Poisson => {
                let next = f64::from(last + 1);
                let ratio = mu / (next + 1.0);
                if ratio >= 1.0 {
                    f64::INFINITY
                } else {
                    p_last * mu / next / (1.0 - ratio)
                }
            }
        }
    }

    /// Truncated `sum_n p_n f(n)` for a kernel with `|f| <= 1`.
    ///
    /// Stops once the remaining probability mass is below the policy's tail
    /// tolerance; errors if that needs more than `max_terms` terms.
    pub fn expect_series<F>(&self, policy: &SeriesPolicy, mut f: F) -> Result<f64>
    where
        F: FnMut(u32) -> f64,
    {
        let mut sum = 0.0;
        for n in 0..policy.max_terms as u32 {
            let p = self.pmf(n);
            sum += p * f(n);
            if self.tail_after(n, p) <= policy.abs_tail_tol {
                return Ok(sum);
            }
        }
        Err(Error::SeriesNotConverged(policy.max_terms))
    }

    /// Photon numbers `0..=N` with their probabilities, `N` chosen by the
    /// policy's tail rule.
    pub fn truncated_support(&self, policy: &SeriesPolicy) -> Result<alloc::vec::Vec<f64>> {
        let mut out = alloc::vec::Vec::new();
        for n in 0..policy.max_terms as u32 {
            let p = self.pmf(n);
            out.push(p);
            if self.tail_after(n, p) <= policy.abs_tail_tol {
                return Ok(out);
            }
        }
        Err(Error::SeriesNotConverged(policy.max_terms))
    }
}

/// Probability of exactly `n` photons from `dist`.
pub fn pmf(dist: &PhotonDistribution, n: u32) -> f64 {
    dist.pmf(n)
}

/// Probability that exactly `k` photons of a noise source coupled through the
/// reflected port of a beam splitter of transmittance `T` reach the detector:
/// `sum_{n>=k} p_n C(n,k) (1-T)^k T^(n-k)`.
///
/// Closed form: the reflected photons follow the same law with mean `mu (1-T)`.
pub fn pi_k(dist: &PhotonDistribution, transmittance: f64, k: u32) -> Result<f64> {
    check_probability("T", transmittance)?;
    Ok(dist.thinned(1.0 - transmittance).pmf(k))
}

/// The literal truncated series for [`pi_k`].
pub fn pi_k_series(
    dist: &PhotonDistribution,
    transmittance: f64,
    k: u32,
    policy: &SeriesPolicy,
) -> Result<f64> {
    check_probability("T", transmittance)?;
    dist.expect_series(policy, |n| {
        if n < k {
            0.0
        } else {
            binomial_pmf(n, k, 1.0 - transmittance)
        }
    })
}

/// Probability that at least one of `i` photons survives a channel of
/// transmittance `T`: `1 - (1-T)^i`.
pub fn t_i(transmittance: f64, i: u32) -> f64 {
    if i == 0 {
        0.0
    } else if transmittance >= 1.0 {
        1.0
    } else {
        -expm1(f64::from(i) * log1p(-transmittance))
    }
}

/// `sum_{j=1..i} C(i,j) T^j (1-T)^(i-j) / (j+1)`.
pub fn r_i(transmittance: f64, i: u32) -> f64 {
    (1..=i)
        .map(|j| binomial_pmf(i, j, transmittance) / f64::from(j + 1))
        .sum()
}

/// `sum_{j=1..i} C(i,j) T^j (1-T)^(i-j) / 2^j`.
pub fn s_i(transmittance: f64, i: u32) -> f64 {
    (1..=i)
        .map(|j| binomial_pmf(i, j, transmittance) / powi(2.0, j))
        .sum()
}

/// `sum_{j=max(0, 1-k-l)..i} C(i,j) T^j (1-T)^(i-j) / 2^j`.
pub fn u_i(transmittance: f64, i: u32, k: u32, l: u32) -> f64 {
    let first = if k + l >= 1 { 0 } else { 1 };
    (first..=i)
        .map(|j| binomial_pmf(i, j, transmittance) / powi(2.0, j))
        .sum()
}
