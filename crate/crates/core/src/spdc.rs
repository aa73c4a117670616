//! Heralded down-conversion source feeding the thermal-bath channel.
//!
//! Pair numbers are Poisson with mean `nu`; an ideal herald accepts every
//! pulse with at least one pair. Multi-photon pulses are assumed fully
//! known to the eavesdropper, which enters the key rate through the
//! single-photon fraction `y`.
//!
//! Key statistics are unnormalised weights per pump pulse (the herald
//! normalisation cancels in `Q` and `y`); autocorrelation statistics are
//! conditioned on a herald.

use crate::arrival::ArrivalLaw;
use crate::error::{check_nonnegative, check_probability};
use crate::math::{exp, exp_m1_minus_x, expm1, powi};
use crate::model::SeriesEvaluation;
use crate::photon_stats::{t_i, u_i, PhotonDistribution, SeriesPolicy};
use crate::security::{secret_fraction_multiphoton, KeyRateResult};
use crate::thermal_bath::pi_table;
use crate::witness::{ClickStats, Omega};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdcParams {
    /// Mean photon pairs per pump pulse.
    pub nu: f64,
    pub transmittance: f64,
    pub mu: f64,
    pub e: f64,
    pub d: f64,
}

/// Weight of an `i`-photon signal pulse that is heralded: zero for `i = 0`,
/// the Poisson probability otherwise.
pub fn heralded_pmf(nu: f64, i: u32) -> f64 {
    if i == 0 {
        0.0
    } else {
        PhotonDistribution::poisson(nu).map_or(0.0, |pairs| pairs.pmf(i))
    }
}

/// Total heralded weight `1 - e^-nu`.
pub fn herald_probability(nu: f64) -> f64 {
    -expm1(-nu)
}

/// Weight of heralded pulses with two or more pairs.
pub fn multi_photon_probability(nu: f64) -> f64 {
    exp(-nu) * exp_m1_minus_x(nu)
}

impl SpdcParams {
    pub fn new(nu: f64, transmittance: f64, mu: f64, e: f64, d: f64) -> Result<Self> {
        let params = Self {
            nu,
            transmittance,
            mu,
            e,
            d,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_nonnegative("nu", self.nu)?;
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

    fn bath_at_receiver(&self) -> PhotonDistribution {
        PhotonDistribution::thermal(self.mu * (1.0 - self.transmittance))
            .unwrap_or_else(|_| unreachable!("validated mean"))
    }

    /// Heralded weight with at least one signal photon reaching Bob.
    fn arrived(&self) -> f64 {
        -expm1(-self.nu * self.transmittance)
    }

    /// Heralded weight with every signal photon lost.
    fn lost(&self) -> f64 {
        exp(-self.nu * self.transmittance) * -expm1(-self.nu * (1.0 - self.transmittance))
    }

    pub fn p_plus(&self, k: u32, l: u32) -> f64 {
        let bath = self.bath_at_receiver();
        self.arrived() * bath.pmf(k) * bath.pmf(l)
    }

    pub fn p_minus(&self, k: u32, l: u32) -> f64 {
        let bath = self.bath_at_receiver();
        self.lost() * bath.pmf(k) * bath.pmf(l)
    }

    /// (signal, bath only, dark count) parts of the accepted weight.
    fn accepted_parts(&self) -> (f64, f64, f64) {
        let bath = ArrivalLaw::from_distribution(&self.bath_at_receiver());
        let lost = self.lost();
        (
            self.arrived() * bath.zero,
            lost * bath.zero * bath.at_least_one,
            self.d * lost * bath.zero * bath.zero,
        )
    }

    pub fn p_exp(&self) -> f64 {
        let (signal, bath_only, dark) = self.accepted_parts();
        signal + 2.0 * bath_only + 2.0 * dark
    }

    pub fn key_rate(&self) -> Result<KeyRateResult> {
        let (signal, bath_only, dark) = self.accepted_parts();
        let p_exp = signal + 2.0 * bath_only + 2.0 * dark;
        key_rate_from(p_exp, 0.5 * self.e * signal + bath_only + dark, self.nu)
    }

    pub fn qber(&self) -> Result<f64> {
        Ok(self.key_rate()?.qber)
    }

    fn require_heralds(&self) -> Result<()> {
        if self.nu > 0.0 {
            Ok(())
        } else {
            Err(Error::UndefinedRate("no heralded pulses at nu = 0"))
        }
    }

    /// Photons reaching the autocorrelation splitter, given a herald.
    pub fn arrival_law(&self) -> Result<ArrivalLaw> {
        self.require_heralds()?;
        let bath = ArrivalLaw::from_distribution(&self.bath_at_receiver());
        Ok(ArrivalLaw::heralded_poisson(self.nu, self.transmittance)
            .compose(&bath)
            .compose(&bath))
    }

    pub fn click_stats(&self) -> Result<ClickStats> {
        Ok(ClickStats::from_law(&self.arrival_law()?))
    }

    pub fn omega(&self) -> Result<Omega> {
        Ok(Omega::from_law(&self.arrival_law()?))
    }

    /// Literal truncated sums over pair number and bath photon numbers.
    pub fn evaluate_series(&self, policy: &SeriesPolicy) -> Result<SeriesEvaluation> {
        self.require_heralds()?;
        let t = self.transmittance;
        let pairs = PhotonDistribution::poisson(self.nu)?;
        let pis = pi_table(&PhotonDistribution::thermal(self.mu)?, t, policy)?;
        let heralded = |i: u32, f: f64| if i == 0 { 0.0 } else { f };

        let herald = pairs.expect_series(policy, |i| heralded(i, 1.0))?;
        let arrived = pairs.expect_series(policy, |i| heralded(i, t_i(t, i)))?;
        let lost = herald - arrived;
        let plus = |k: usize, l: usize| arrived * pis[k] * pis[l];
        let minus = |k: usize, l: usize| lost * pis[k] * pis[l];

        let plus_k0: f64 = (0..pis.len()).map(|k| plus(k, 0)).sum();
        let minus_k0: f64 = (1..pis.len()).map(|k| minus(k, 0)).sum();
        let p_exp = plus_k0 + 2.0 * minus_k0 + 2.0 * self.d * minus(0, 0);
        let errors = 0.5 * self.e * plus_k0 + minus_k0 + self.d * minus(0, 0);
        let key = key_rate_from(p_exp, errors, self.nu)?;

        // u_i depends on (k, l) only through whether k + l is zero.
        let u_vacuum = pairs.expect_series(policy, |i| heralded(i, u_i(t, i, 0, 0)))?;
        let u_other = pairs.expect_series(policy, |i| heralded(i, u_i(t, i, 0, 1)))?;
        let mut single = 0.0;
        for k in 0..pis.len() {
            for l in 0..pis.len() {
                let u = if k + l == 0 { u_vacuum } else { u_other };
                single += 2.0 * powi(0.5, (k + l) as u32) * u * pis[k] * pis[l];
            }
        }
        single /= herald;
        let vacuum_pulses = pairs.expect_series(policy, |i| heralded(i, powi(1.0 - t, i)))?;
        let none = vacuum_pulses * pis[0] * pis[0] / herald;
        let omega_weight = pairs.expect_series(policy, |i| {
            if i == 0 {
                return 0.0;
            }
            f64::from(i) * t * powi(1.0 - t, i - 1) * pis[0] * pis[0]
                + powi(1.0 - t, i) * 2.0 * pis[0] * pis[1]
        })?;
        let omega_one = omega_weight / herald;
        Ok(SeriesEvaluation {
            key,
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

fn key_rate_from(p_exp: f64, errors: f64, nu: f64) -> Result<KeyRateResult> {
    if p_exp <= 0.0 {
        return Err(Error::UndefinedRate("p_exp"));
    }
    let qber = errors / p_exp;
    let y = ((p_exp - multi_photon_probability(nu)) / p_exp).max(0.0);
    Ok(KeyRateResult {
        qber,
        single_photon_fraction: y,
        p_exp,
        delta_i: secret_fraction_multiphoton(qber, y),
    })
}
