//! Event-by-event Monte Carlo of the three setups, used as an independent
//! check of the closed-form statistics.
//!
//! Each pulse draws its photons once and routes them through both Bob's
//! polarising key measurement and the 50:50 autocorrelation splitter.
//! Pulses are grouped in blocks; block `b` draws from stream `b` of a
//! ChaCha8 generator seeded with the configured seed, so any partition of
//! blocks across workers gives the same totals.

use crate::math::{log, sqrt};
use crate::model::Model;
use crate::noise_before::NoiseBeforeParams;
use crate::photon_stats::{NoiseKind, PhotonDistribution};
use crate::spdc::{herald_probability, SpdcParams};
use crate::thermal_bath::ThermalBathParams;
use crate::{Error, Result};
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How Bob's detectors produce spurious clicks in the key measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DarkCountModel {
    /// A gate with no photon at either detector clicks with probability `2d`,
    /// at a uniformly chosen detector. This is the first-order model used by
    /// the closed-form statistics.
    #[default]
    FirstOrder,
    /// Every detector fires independently with probability `d` in every gate.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub block_size: u64,
    pub dark_counts: DarkCountModel,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
            block_size: 1 << 16,
            dark_counts: DarkCountModel::FirstOrder,
        }
    }
}

impl McConfig {
    pub fn blocks(&self) -> u64 {
        self.samples.div_ceil(self.block_size)
    }

    fn block_len(&self, block: u64) -> u64 {
        let start = block * self.block_size;
        self.block_size.min(self.samples - start)
    }
}

/// Measurement a statistic belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Key,
    Autocorrelation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    PExp,
    Qber,
    PSingle,
    PCoincidence,
    PNone,
    OmegaOne,
    OmegaTwoPlus,
}

impl Statistic {
    pub const ALL: [Statistic; 7] = [
        Statistic::PExp,
        Statistic::Qber,
        Statistic::PSingle,
        Statistic::PCoincidence,
        Statistic::PNone,
        Statistic::OmegaOne,
        Statistic::OmegaTwoPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::PExp => "p_exp",
            Statistic::Qber => "qber",
            Statistic::PSingle => "P_S",
            Statistic::PCoincidence => "P_C",
            Statistic::PNone => "P_none",
            Statistic::OmegaOne => "omega_1",
            Statistic::OmegaTwoPlus => "omega_2+",
        }
    }

    pub fn geometry(self) -> Geometry {
        match self {
            Statistic::PExp | Statistic::Qber => Geometry::Key,
            _ => Geometry::Autocorrelation,
        }
    }
}

/// Bernoulli-tally estimate of a probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl McEstimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let value = if trials == 0 {
            0.0
        } else {
            hits as f64 / trials as f64
        };
        Self {
            value,
            std_err: bernoulli_std_err(value, trials),
            samples: trials,
        }
    }
}

fn bernoulli_std_err(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::INFINITY;
    }
    sqrt((p * (1.0 - p)).max(0.0) / trials as f64)
}

/// Event counts; tallies of disjoint blocks add.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub pulses: u64,
    pub accepted: u64,
    pub errors: u64,
    pub single: u64,
    pub coincidence: u64,
    pub no_click: u64,
    pub arrived_one: u64,
    pub arrived_two_plus: u64,
    pub arrived_none: u64,
}

impl Tally {
    pub fn merge(&mut self, other: &Tally) {
        self.pulses += other.pulses;
        self.accepted += other.accepted;
        self.errors += other.errors;
        self.single += other.single;
        self.coincidence += other.coincidence;
        self.no_click += other.no_click;
        self.arrived_one += other.arrived_one;
        self.arrived_two_plus += other.arrived_two_plus;
        self.arrived_none += other.arrived_none;
    }

    pub fn estimate(&self, statistic: Statistic) -> McEstimate {
        let n = self.pulses;
        match statistic {
            Statistic::PExp => McEstimate::from_counts(self.accepted, n),
            Statistic::Qber => McEstimate::from_counts(self.errors, self.accepted),
            Statistic::PSingle => McEstimate::from_counts(self.single, n),
            Statistic::PCoincidence => McEstimate::from_counts(self.coincidence, n),
            Statistic::PNone => McEstimate::from_counts(self.no_click, n),
            Statistic::OmegaOne => McEstimate::from_counts(self.arrived_one, n),
            Statistic::OmegaTwoPlus => McEstimate::from_counts(self.arrived_two_plus, n),
        }
    }
}

/// Photons of one pulse at Bob, before detection.
struct Arrival {
    /// Signal photons (all in the same polarisation).
    signal: u32,
    /// Noise photons aligned with the signal's correct detector.
    noise_right: u32,
    /// Noise photons at the other detector.
    noise_wrong: u32,
}

impl Arrival {
    fn total(&self) -> u32 {
        self.signal + self.noise_right + self.noise_wrong
    }
}

fn uniform<R: Rng>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

fn sample_thermal<R: Rng>(rng: &mut R, mean: f64) -> u32 {
    if mean <= 0.0 {
        return 0;
    }
    // P(n >= k) = q^k
    let q = mean / (1.0 + mean);
    let u = 1.0 - uniform(rng);
    let n = log(u) / log(q);
    if n >= f64::from(u32::MAX) {
        u32::MAX
    } else {
        n as u32
    }
}

/// Poisson law restricted to `k >= first` by inversion; `total` is the
/// mass of that range.
fn sample_poisson_from<R: Rng>(rng: &mut R, mean: f64, first: u32, total: f64) -> u32 {
    let mut k = first;
    let mut pk = PhotonDistribution::poisson(mean).map_or(0.0, |d| d.pmf(first)) / total;
    let mut cumulative = pk;
    let u = uniform(rng);
    while u >= cumulative && pk > 0.0 {
        k += 1;
        pk *= mean / f64::from(k);
        cumulative += pk;
    }
    k
}

fn sample_poisson<R: Rng>(rng: &mut R, mean: f64) -> u32 {
    if mean <= 0.0 {
        return 0;
    }
    sample_poisson_from(rng, mean, 0, 1.0)
}

fn sample_noise<R: Rng>(rng: &mut R, kind: NoiseKind, mean: f64) -> u32 {
    match kind {
        NoiseKind::Thermal => sample_thermal(rng, mean),
        NoiseKind::Poisson => sample_poisson(rng, mean),
    }
}

fn survivors<R: Rng>(rng: &mut R, n: u32, keep: f64) -> u32 {
    (0..n).filter(|_| uniform(rng) < keep).count() as u32
}

fn bath_pair<R: Rng>(rng: &mut R, mu: f64, transmittance: f64) -> (u32, u32) {
    let right = sample_thermal(rng, mu);
    let wrong = sample_thermal(rng, mu);
    (
        survivors(rng, right, 1.0 - transmittance),
        survivors(rng, wrong, 1.0 - transmittance),
    )
}

fn draw_thermal_bath<R: Rng>(rng: &mut R, m: &ThermalBathParams) -> Arrival {
    let emitted = uniform(rng) < m.p;
    let signal = u32::from(emitted && uniform(rng) < m.transmittance);
    let (noise_right, noise_wrong) = bath_pair(rng, m.mu, m.transmittance);
    Arrival {
        signal,
        noise_right,
        noise_wrong,
    }
}

fn draw_noise_before<R: Rng>(rng: &mut R, m: &NoiseBeforeParams) -> Arrival {
    let emitted = uniform(rng) < m.p;
    let signal = u32::from(emitted && uniform(rng) < m.transmittance);
    let noise = sample_noise(rng, m.noise_kind, m.mu);
    let surviving = survivors(rng, noise, m.transmittance);
    // Overlap of the pulse's noise polarisation with the signal's correct
    // detector; the relative phase never matters for on/off detection.
    let x = uniform(rng);
    let noise_right = survivors(rng, surviving, x);
    Arrival {
        signal,
        noise_right,
        noise_wrong: surviving - noise_right,
    }
}

fn draw_spdc<R: Rng>(rng: &mut R, m: &SpdcParams) -> Arrival {
    let pairs = sample_poisson_from(rng, m.nu, 1, herald_probability(m.nu));
    let signal = survivors(rng, pairs, m.transmittance);
    let (noise_right, noise_wrong) = bath_pair(rng, m.mu, m.transmittance);
    Arrival {
        signal,
        noise_right,
        noise_wrong,
    }
}

fn depolarisation(model: &Model) -> f64 {
    match model {
        Model::ThermalBath(m) => m.e,
        Model::NoiseBefore(m) => m.e,
        Model::Spdc(m) => m.e,
    }
}

fn record<R: Rng>(
    rng: &mut R,
    tally: &mut Tally,
    arrival: &Arrival,
    e: f64,
    d: f64,
    dark_counts: DarkCountModel,
) {
    tally.pulses += 1;

    // Key measurement. With probability e the signal polarisation is
    // replaced by a random one.
    let signal_wrong = arrival.signal > 0 && uniform(rng) < e && uniform(rng) < 0.5;
    let mut right = arrival.noise_right > 0 || (arrival.signal > 0 && !signal_wrong);
    let mut wrong = arrival.noise_wrong > 0 || signal_wrong;
    match dark_counts {
        DarkCountModel::FirstOrder => {
            if !right && !wrong && uniform(rng) < 2.0 * d {
                if uniform(rng) < 0.5 {
                    right = true;
                } else {
                    wrong = true;
                }
            }
        }
        DarkCountModel::Independent => {
            right |= uniform(rng) < d;
            wrong |= uniform(rng) < d;
        }
    }
    if right != wrong {
        tally.accepted += 1;
        tally.errors += u64::from(wrong);
    }

    // Autocorrelation splitter with ideal detectors.
    let m = arrival.total();
    match m {
        0 => {
            tally.no_click += 1;
            tally.arrived_none += 1;
        }
        _ => {
            if m == 1 {
                tally.arrived_one += 1;
            } else {
                tally.arrived_two_plus += 1;
            }
            let first = uniform(rng) < 0.5;
            let split = (1..m).any(|_| (uniform(rng) < 0.5) != first);
            if split {
                tally.coincidence += 1;
            } else {
                tally.single += 1;
            }
        }
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Simulates block `block` of `config`.
pub fn simulate_block(model: &Model, config: &McConfig, block: u64) -> Result<Tally> {
    model.validate()?;
    if let Model::Spdc(m) = model {
        if m.nu <= 0.0 {
            return Err(Error::UndefinedRate("no heralded pulses at nu = 0"));
        }
    }
    let mut rng = block_rng(config.seed, block);
    let mut tally = Tally::default();
    let e = depolarisation(model);
    let d = model.dark_count();
    for _ in 0..config.block_len(block) {
        let arrival = match model {
            Model::ThermalBath(m) => draw_thermal_bath(&mut rng, m),
            Model::NoiseBefore(m) => draw_noise_before(&mut rng, m),
            Model::Spdc(m) => draw_spdc(&mut rng, m),
        };
        record(&mut rng, &mut tally, &arrival, e, d, config.dark_counts);
    }
    Ok(tally)
}

fn check_config(config: &McConfig) -> Result<()> {
    if config.samples == 0 {
        return Err(Error::Domain {
            name: "samples",
            value: 0.0,
        });
    }
    if config.block_size == 0 {
        return Err(Error::Domain {
            name: "block_size",
            value: 0.0,
        });
    }
    Ok(())
}

/// All blocks in order on the calling thread.
pub fn simulate(model: &Model, config: &McConfig) -> Result<Tally> {
    check_config(config)?;
    let mut total = Tally::default();
    for block in 0..config.blocks() {
        total.merge(&simulate_block(model, config, block)?);
    }
    Ok(total)
}

/// Closed-form values of every simulated statistic, normalised per pulse
/// (per heralded pulse for the heralded source).
pub fn analytic_statistics(model: &Model) -> Result<Vec<(Statistic, f64)>> {
    let key = model.key_rate()?;
    let per_pulse = match model {
        Model::Spdc(m) => herald_probability(m.nu),
        _ => 1.0,
    };
    let click = model.click_stats()?;
    let omega = model.omega()?;
    Ok(Statistic::ALL
        .iter()
        .map(|&s| {
            let value = match s {
                Statistic::PExp => key.p_exp / per_pulse,
                Statistic::Qber => key.qber,
                Statistic::PSingle => click.p_single,
                Statistic::PCoincidence => click.p_coincidence,
                Statistic::PNone => click.p_none,
                Statistic::OmegaOne => omega.one,
                Statistic::OmegaTwoPlus => omega.two_plus,
            };
            (s, value)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub statistic: Statistic,
    pub analytic: f64,
    pub estimate: McEstimate,
    /// `|analytic - estimate|` in units of the standard error implied by the
    /// analytic probability.
    pub sigma_distance: f64,
}

/// Analytic statistics against the estimates of `tally`.
pub fn compare(model: &Model, tally: &Tally) -> Result<Vec<Comparison>> {
    Ok(analytic_statistics(model)?
        .into_iter()
        .map(|(statistic, analytic)| {
            let estimate = tally.estimate(statistic);
            let sigma = bernoulli_std_err(analytic, estimate.samples);
            let diff = (analytic - estimate.value).abs();
            let sigma_distance = if sigma > 0.0 {
                diff / sigma
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            Comparison {
                statistic,
                analytic,
                estimate,
                sigma_distance,
            }
        })
        .collect())
}

/// Fraction of pulses in which all `j` noise photons behind a polarising
/// splitter land on the same detector, with the pulse polarisation drawn
/// uniformly per pulse.
pub fn same_detector_fraction(j: u32, samples: u64, seed: u64) -> McEstimate {
    let mut rng = block_rng(seed, 0);
    let mut hits = 0;
    for _ in 0..samples {
        let x = uniform(&mut rng);
        let right = survivors(&mut rng, j, x);
        if right == 0 || right == j {
            hits += 1;
        }
    }
    McEstimate::from_counts(hits, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_single_photon() {
        let model = Model::ThermalBath(ThermalBathParams::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap());
        let config = McConfig {
            samples: 10_000,
            ..McConfig::default()
        };
        let tally = simulate(&model, &config).unwrap();
        assert_eq!(tally.estimate(Statistic::PExp).value, 1.0);
        assert_eq!(tally.estimate(Statistic::Qber).value, 0.0);
        assert_eq!(tally.single, 10_000);
    }

    #[test]
    fn blocks_partition_the_samples() {
        let config = McConfig {
            samples: 100_001,
            block_size: 1000,
            ..McConfig::default()
        };
        let total: u64 = (0..config.blocks()).map(|b| config.block_len(b)).sum();
        assert_eq!(total, 100_001);
    }

    #[test]
    fn seeded_runs_repeat() {
        let model = Model::NoiseBefore(
            NoiseBeforeParams::new(0.5, 0.4, 0.2, 0.03, 1e-3, NoiseKind::Thermal).unwrap(),
        );
        let config = McConfig {
            samples: 20_000,
            seed: 7,
            block_size: 3000,
            ..McConfig::default()
        };
        assert_eq!(simulate(&model, &config).unwrap(), simulate(&model, &config).unwrap());
    }

    #[test]
    fn samplers_have_the_right_means() {
        let mut rng = block_rng(3, 0);
        let n = 200_000;
        let thermal: u64 = (0..n).map(|_| u64::from(sample_thermal(&mut rng, 0.7))).sum();
        let poisson: u64 = (0..n).map(|_| u64::from(sample_poisson(&mut rng, 0.7))).sum();
        assert!((thermal as f64 / n as f64 - 0.7).abs() < 0.02);
        assert!((poisson as f64 / n as f64 - 0.7).abs() < 0.01);
        let heralded: u64 = (0..n)
            .map(|_| u64::from(sample_poisson_from(&mut rng, 0.1, 1, herald_probability(0.1))))
            .sum();
        // E[i | i >= 1] = nu / (1 - e^-nu)
        let expected = 0.1 / herald_probability(0.1);
        assert!((heralded as f64 / n as f64 - expected).abs() < 0.005);
    }
}
