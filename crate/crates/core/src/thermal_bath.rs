//! Sub-unity single-photon source, lossy channel coupled to two independent
//! thermal baths (one per polarisation mode), depolarisation `e` and detector
//! dark counts `d`.
//!
//! A signal photon survives with probability `pT`; each bath contributes
//! `k` photons to Bob with probability `pi_k(T)`, the bath photons entering
//! through the reflected port of the channel beam splitter.

use crate::arrival::ArrivalLaw;
use crate::error::{check_nonnegative, check_probability};
use crate::math::powi;
use crate::model::SeriesEvaluation;
use crate::photon_stats::{pi_k_series, PhotonDistribution, SeriesPolicy};
use crate::security::{secret_fraction_ideal, KeyRateResult};
use crate::witness::{ClickStats, Omega};
use crate::{Error, Result};
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalBathParams {
    /// Emission probability per pulse.
    pub p: f64,
    pub transmittance: f64,
    /// Mean bath photons per pulse and polarisation mode.
    pub mu: f64,
    /// Depolarisation probability.
    pub e: f64,
    /// Dark-count probability per gate.
    pub d: f64,
}

impl ThermalBathParams {
    pub fn new(p: f64, transmittance: f64, mu: f64, e: f64, d: f64) -> Result<Self> {
        let params = Self {
            p,
            transmittance,
            mu,
            e,
            d,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p", self.p)?;
        check_probability("T", self.transmittance)?;
        check_nonnegative("mu", self.mu)?;
        check_probability("e", self.e)?;
        if !(0.0..1.0).contains(&self.d) {
            return Err(Error::Domain {
                name: "d",
                value: self.d,
            });
        }
        Ok(())
    }

    fn signal(&self) -> f64 {
        self.p * self.transmittance
    }

    /// Bath photons reaching Bob in one polarisation mode.
    fn bath_at_receiver(&self) -> PhotonDistribution {
        PhotonDistribution::thermal(self.mu * (1.0 - self.transmittance))
            .unwrap_or_else(|_| unreachable!("validated mean"))
    }

    fn pi(&self, k: u32) -> f64 {
        self.bath_at_receiver().pmf(k)
    }

    /// Signal photon arrives together with `k` bath photons at the right
    /// detector and `l` at the wrong one.
    pub fn p_plus(&self, k: u32, l: u32) -> f64 {
        self.signal() * self.pi(k) * self.pi(l)
    }

    /// As [`Self::p_plus`] but the signal photon is lost.
    pub fn p_minus(&self, k: u32, l: u32) -> f64 {
        (1.0 - self.signal()) * self.pi(k) * self.pi(l)
    }

    /// Parts of the accepted-event probability: (signal, bath only, dark count).
    fn accepted_parts(&self) -> (f64, f64, f64) {
        let bath = ArrivalLaw::from_distribution(&self.bath_at_receiver());
        let sig = self.signal();
        // sum_k pi_k = 1, sum_{k>=1} pi_k = P(at least one bath photon)
        let signal = sig * bath.zero;
        let bath_only = (1.0 - sig) * bath.zero * bath.at_least_one;
        let dark = self.d * (1.0 - sig) * bath.zero * bath.zero;
        (signal, bath_only, dark)
    }

    /// Probability that exactly one of Bob's detectors clicks.
    pub fn p_exp(&self) -> f64 {
        let (signal, bath_only, dark) = self.accepted_parts();
        signal + 2.0 * bath_only + 2.0 * dark
    }

    pub fn qber(&self) -> Result<f64> {
        let (signal, bath_only, dark) = self.accepted_parts();
        let p_exp = signal + 2.0 * bath_only + 2.0 * dark;
        if p_exp <= 0.0 {
            return Err(Error::UndefinedRate("p_exp"));
        }
        Ok((0.5 * self.e * signal + bath_only + dark) / p_exp)
    }

    pub fn key_rate(&self) -> Result<KeyRateResult> {
        let qber = self.qber()?;
        Ok(KeyRateResult {
            qber,
            single_photon_fraction: 1.0,
            p_exp: self.p_exp(),
            delta_i: secret_fraction_ideal(qber),
        })
    }

    /// Photons reaching the autocorrelation splitter: signal plus both baths.
    pub fn arrival_law(&self) -> ArrivalLaw {
        let bath = ArrivalLaw::from_distribution(&self.bath_at_receiver());
        ArrivalLaw::bernoulli(self.signal())
            .compose(&bath)
            .compose(&bath)
    }

    pub fn click_stats(&self) -> ClickStats {
        ClickStats::from_law(&self.arrival_law())
    }

    pub fn omega(&self) -> Omega {
        Omega::from_law(&self.arrival_law())
    }

    /// Literal truncated sums over `k, l` with `pi_k` from its series.
    pub fn evaluate_series(&self, policy: &SeriesPolicy) -> Result<SeriesEvaluation> {
        let bath = PhotonDistribution::thermal(self.mu)?;
        let pis = pi_table(&bath, self.transmittance, policy)?;
        let sig = self.signal();
        let plus = |k: usize, l: usize| sig * pis[k] * pis[l];
        let minus = |k: usize, l: usize| (1.0 - sig) * pis[k] * pis[l];

        let plus_k0: f64 = (0..pis.len()).map(|k| plus(k, 0)).sum();
        let minus_k0: f64 = (1..pis.len()).map(|k| minus(k, 0)).sum();
        let p_exp = plus_k0 + 2.0 * minus_k0 + 2.0 * self.d * minus(0, 0);
        if p_exp <= 0.0 {
            return Err(Error::UndefinedRate("p_exp"));
        }
        let qber = (0.5 * self.e * plus_k0 + minus_k0 + self.d * minus(0, 0)) / p_exp;

        let mut single = -2.0 * minus(0, 0);
        for k in 0..pis.len() {
            for l in 0..pis.len() {
                single += (plus(k, l) + 2.0 * minus(k, l)) * powi(0.5, (k + l) as u32);
            }
        }
        let none = minus(0, 0);
        let omega_one = plus(0, 0) + 2.0 * minus(1, 0);
        Ok(SeriesEvaluation {
            key: KeyRateResult {
                qber,
                single_photon_fraction: 1.0,
                p_exp,
                delta_i: secret_fraction_ideal(qber),
            },
            click: ClickStats {
                p_single: single,
                p_coincidence: 1.0 - single - none,
                p_none: none,
            },
            omega: Omega {
                one: omega_one,
                two_plus: 1.0 - omega_one - none,
            },
        })
    }
}

/// `pi_k` for `k = 0, 1, ...` until the reflected-photon law is exhausted to
/// the policy's tail tolerance.
pub(crate) fn pi_table(
    bath: &PhotonDistribution,
    transmittance: f64,
    policy: &SeriesPolicy,
) -> Result<Vec<f64>> {
    let mut pis = Vec::new();
    let mut mass = 0.0;
    for k in 0..policy.max_terms() as u32 {
        let pi = pi_k_series(bath, transmittance, k, policy)?;
        pis.push(pi);
        mass += pi;
        if k >= 1 && 1.0 - mass <= policy.abs_tail_tol() {
            return Ok(pis);
        }
    }
    Err(Error::SeriesNotConverged(policy.max_terms()))
}
