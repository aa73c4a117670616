//! Numerics for discrete-variable QKD over noisy channels.
//!
//! The crate evaluates click statistics and QBER for three channel models
//! (thermal bath, noise coupled before the channel, heralded SPDC source with
//! a thermal bath), turns them into secret-fraction bounds and
//! nonclassicality / quantum non-Gaussianity witnesses for the light reaching
//! the receiver, and sweeps the maximal tolerable noise `mu_max(T)` for each
//! criterion. An independent photon-level Monte Carlo sampler lives in
//! [`mc`] and reproduces every analytic probability.
//!
//! The crate is `no_std` (it needs `alloc` for curves and estimate maps).
//! File formats, the CLI and the parallel drivers live in the `ngqkd` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arrival;
pub mod boundary;
mod error;
pub mod math;
pub mod mc;
pub mod model;
pub mod noise_before;
pub mod photon_stats;
pub mod roots;
pub mod security;
pub mod spdc;
pub mod thermal_bath;
pub mod witness;

pub use error::{Error, Result};
pub use model::{Model, ModelKind};
pub use photon_stats::{NoiseKind, PhotonDistribution, SeriesPolicy};
pub use security::KeyRateResult;
pub use witness::ClickStats;
