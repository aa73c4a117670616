//! Single-photon source whose pulses pick up noise before the lossy channel.
//!
//! All noise photons of a pulse share one random polarisation. Behind Bob's
//! polarising splitter the survivors go to one detector with probability `x`
//! and to the other with `1 - x`, `x` uniform on `[0, 1]`; averaged over `x`
//! the chance that all `j` survivors hit the same given detector is
//! `1 / (j + 1)`. In the autocorrelation setup they split 50:50 instead.

use crate::arrival::ArrivalLaw;
use crate::error::{check_nonnegative, check_probability};
use crate::math::powi;
use crate::model::SeriesEvaluation;
use crate::photon_stats::{r_i, s_i, NoiseKind, PhotonDistribution, SeriesPolicy};
use crate::security::{secret_fraction_ideal, KeyRateResult};
use crate::witness::{ClickStats, Omega};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBeforeParams {
    pub p: f64,
    pub transmittance: f64,
    /// Mean noise photons per pulse.
    pub mu: f64,
    pub e: f64,
    pub d: f64,
    pub noise_kind: NoiseKind,
}

/// Accepted-event probabilities split by cause.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventProbs {
    /// Signal photon alone.
    pub signal: f64,
    /// Noise photons alone, all on one detector.
    pub noise: f64,
    /// Signal photon and noise photons on the same detector.
    pub noise_with_signal: f64,
    /// Dark count in an otherwise empty gate.
    pub dark: f64,
}

impl EventProbs {
    pub fn total(&self) -> f64 {
        self.signal + self.noise + self.noise_with_signal + self.dark
    }
}

impl NoiseBeforeParams {
    pub fn new(
        p: f64,
        transmittance: f64,
        mu: f64,
        e: f64,
        d: f64,
        noise_kind: NoiseKind,
    ) -> Result<Self> {
        let params = Self {
            p,
            transmittance,
            mu,
            e,
            d,
            noise_kind,
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

    fn noise(&self) -> PhotonDistribution {
        PhotonDistribution::new(self.noise_kind, self.mu)
            .unwrap_or_else(|_| unreachable!("validated mean"))
    }

    pub fn event_probs(&self) -> EventProbs {
        let sig = self.signal();
        let noise = self.noise();
        let all_lost = noise.pgf(1.0 - self.transmittance);
        let same_side = noise.same_detector_mass(self.transmittance);
        EventProbs {
            signal: sig * all_lost,
            noise: 2.0 * (1.0 - sig) * same_side,
            noise_with_signal: sig * same_side,
            dark: 2.0 * self.d * (1.0 - sig) * all_lost,
        }
    }

    pub fn p_exp(&self) -> f64 {
        self.event_probs().total()
    }

    pub fn qber(&self) -> Result<f64> {
        qber_from(&self.event_probs(), self.e)
    }

    pub fn key_rate(&self) -> Result<KeyRateResult> {
        let events = self.event_probs();
        let qber = qber_from(&events, self.e)?;
        Ok(KeyRateResult {
            qber,
            single_photon_fraction: 1.0,
            p_exp: events.total(),
            delta_i: secret_fraction_ideal(qber),
        })
    }

    /// Signal photon plus the noise photons that survive the channel.
    pub fn arrival_law(&self) -> ArrivalLaw {
        let surviving = self.noise().thinned(self.transmittance);
        ArrivalLaw::bernoulli(self.signal()).compose(&ArrivalLaw::from_distribution(&surviving))
    }

    pub fn click_stats(&self) -> ClickStats {
        ClickStats::from_law(&self.arrival_law())
    }

    pub fn omega(&self) -> Omega {
        Omega::from_law(&self.arrival_law())
    }

    /// Literal truncated sums over the emitted noise photon number.
    pub fn evaluate_series(&self, policy: &SeriesPolicy) -> Result<SeriesEvaluation> {
        let noise = self.noise();
        let t = self.transmittance;
        let sig = self.signal();
        let all_lost = noise.expect_series(policy, |i| powi(1.0 - t, i))?;
        let same_side = noise.expect_series(policy, |i| r_i(t, i))?;
        let split = noise.expect_series(policy, |i| s_i(t, i))?;
        let one_survivor = noise.expect_series(policy, |i| {
            if i == 0 {
                0.0
            } else {
                f64::from(i) * t * powi(1.0 - t, i - 1)
            }
        })?;

        let events = EventProbs {
            signal: sig * all_lost,
            noise: 2.0 * (1.0 - sig) * same_side,
            noise_with_signal: sig * same_side,
            dark: 2.0 * self.d * (1.0 - sig) * all_lost,
        };
        let qber = qber_from(&events, self.e)?;
        let none = (1.0 - sig) * all_lost;
        let single = events.signal + sig * split + 2.0 * (1.0 - sig) * split;
        let omega_one = events.signal + (1.0 - sig) * one_survivor;
        Ok(SeriesEvaluation {
            key: KeyRateResult {
                qber,
                single_photon_fraction: 1.0,
                p_exp: events.total(),
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

fn qber_from(events: &EventProbs, e: f64) -> Result<f64> {
    let p_exp = events.total();
    if p_exp <= 0.0 {
        return Err(Error::UndefinedRate("p_exp"));
    }
    Ok((e * (events.signal + events.noise_with_signal) + events.noise + events.dark)
        / (2.0 * p_exp))
}
