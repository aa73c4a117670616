//! The three QKD setups behind one interface.

use crate::arrival::ArrivalLaw;
use crate::noise_before::NoiseBeforeParams;
use crate::photon_stats::SeriesPolicy;
use crate::security::KeyRateResult;
use crate::spdc::SpdcParams;
use crate::thermal_bath::ThermalBathParams;
use crate::witness::{ClickStats, Omega};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    ThermalBath,
    NoiseBefore,
    Spdc,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::ThermalBath => "thermal-bath",
            ModelKind::NoiseBefore => "noise-before",
            ModelKind::Spdc => "spdc",
        }
    }
}

/// Every statistic of a model evaluated through its literal truncated sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEvaluation {
    pub key: KeyRateResult,
    pub click: ClickStats,
    pub omega: Omega,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    ThermalBath(ThermalBathParams),
    NoiseBefore(NoiseBeforeParams),
    Spdc(SpdcParams),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::ThermalBath(_) => ModelKind::ThermalBath,
            Model::NoiseBefore(_) => ModelKind::NoiseBefore,
            Model::Spdc(_) => ModelKind::Spdc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Model::ThermalBath(m) => m.validate(),
            Model::NoiseBefore(m) => m.validate(),
            Model::Spdc(m) => m.validate(),
        }
    }

    pub fn transmittance(&self) -> f64 {
        match self {
            Model::ThermalBath(m) => m.transmittance,
            Model::NoiseBefore(m) => m.transmittance,
            Model::Spdc(m) => m.transmittance,
        }
    }

    pub fn mu(&self) -> f64 {
        match self {
            Model::ThermalBath(m) => m.mu,
            Model::NoiseBefore(m) => m.mu,
            Model::Spdc(m) => m.mu,
        }
    }

    pub fn dark_count(&self) -> f64 {
        match self {
            Model::ThermalBath(m) => m.d,
            Model::NoiseBefore(m) => m.d,
            Model::Spdc(m) => m.d,
        }
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        match &mut self {
            Model::ThermalBath(m) => m.mu = mu,
            Model::NoiseBefore(m) => m.mu = mu,
            Model::Spdc(m) => m.mu = mu,
        }
        self
    }

    pub fn with_transmittance(mut self, transmittance: f64) -> Self {
        match &mut self {
            Model::ThermalBath(m) => m.transmittance = transmittance,
            Model::NoiseBefore(m) => m.transmittance = transmittance,
            Model::Spdc(m) => m.transmittance = transmittance,
        }
        self
    }

    pub fn key_rate(&self) -> Result<KeyRateResult> {
        match self {
            Model::ThermalBath(m) => m.key_rate(),
            Model::NoiseBefore(m) => m.key_rate(),
            Model::Spdc(m) => m.key_rate(),
        }
    }

    pub fn arrival_law(&self) -> Result<ArrivalLaw> {
        match self {
            Model::ThermalBath(m) => Ok(m.arrival_law()),
            Model::NoiseBefore(m) => Ok(m.arrival_law()),
            Model::Spdc(m) => m.arrival_law(),
        }
    }

    pub fn click_stats(&self) -> Result<ClickStats> {
        Ok(ClickStats::from_law(&self.arrival_law()?))
    }

    pub fn omega(&self) -> Result<Omega> {
        Ok(Omega::from_law(&self.arrival_law()?))
    }

    pub fn evaluate_series(&self, policy: &SeriesPolicy) -> Result<SeriesEvaluation> {
        match self {
            Model::ThermalBath(m) => m.evaluate_series(policy),
            Model::NoiseBefore(m) => m.evaluate_series(policy),
            Model::Spdc(m) => m.evaluate_series(policy),
        }
    }
}
