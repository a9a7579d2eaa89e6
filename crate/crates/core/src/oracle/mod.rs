//! Brute-force reference model: a linear-optics network of beam splitters,
//! delays and phase elements, driven by a frequency-entangled photon pair.
//! The coincidence rate is the squared output amplitude summed over the
//! joint spectrum, with no analytic reduction.

mod network;
mod two_photon;

use std::sync::Arc;

use rayon::prelude::*;

use crate::dispersion::{PhaseFunction, SharedPhase};
use crate::error::{Error, Result};
use crate::interferogram::{Normalization, SetupConfig};
use crate::spectrum::FrequencyGrid;

pub use network::{build_hom_network, build_cascade_network, Element, ModeNetwork, TransferMatrix};
pub use two_photon::{
    coincidence_oracle, outcome_probabilities, pair_amplitude, two_photon_amplitude, OutcomeTable,
    TwoPhotonAmplitude, TwoPhotonState,
};

/// Phase cached at the absolute frequencies `w0 + v_k` of a grid; other
/// frequencies fall through to the wrapped function.
#[derive(Debug)]
pub struct SampledPhase {
    inner: SharedPhase,
    center: f64,
    grid: FrequencyGrid,
    values: Vec<f64>,
}

impl SampledPhase {
    pub fn new(inner: SharedPhase, center: f64, grid: &FrequencyGrid) -> Result<Self> {
        let values = grid
            .detunings()
            .map(|v| inner.phase(center + v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            inner,
            center,
            grid: grid.clone(),
            values,
        })
    }
}

impl PhaseFunction for SampledPhase {
    fn phase(&self, omega: f64) -> Result<f64> {
        let x = (omega - self.center) / self.grid.step() + 0.5 * (self.grid.len() - 1) as f64;
        let k = x.round();
        if k >= 0.0 && (k as usize) < self.values.len() {
            let k = k as usize;
            if self.center + self.grid.detuning(k) == omega {
                return Ok(self.values[k]);
            }
        }
        self.inner.phase(omega)
    }

    fn describe(&self) -> String {
        self.inner.describe()
    }
}

/// Oracle rates over a set of delays, in the setup's output units. Under
/// `baseline_one` the divisor is the distinguishable-photon rate, which is
/// the delay-independent part of the coincidence rate.
#[derive(Clone, Debug)]
pub struct OracleScan {
    pub taus: Vec<f64>,
    pub rates: Vec<f64>,
    pub raw_baseline: f64,
}

pub fn oracle_scan(setup: &SetupConfig, taus: &[f64]) -> Result<OracleScan> {
    if let Some(t) = taus.iter().find(|t| !t.is_finite()) {
        return Err(Error::invalid(format!("tau1 must be finite, got {t}")));
    }
    let center = setup.spectrum.center_frequency();
    let sample: SharedPhase = Arc::new(SampledPhase::new(setup.sample.clone(), center, &setup.grid)?);
    let state = TwoPhotonState::new(setup.spectrum.clone(), setup.grid.clone())?;
    let net = build_cascade_network(0.0, setup.tau2, setup.placement, sample.clone())?;
    let raw_baseline = two_photon_amplitude(&net, &state)?.distinguishable_probability();
    let divisor = match setup.normalization {
        Normalization::Raw => 1.0,
        Normalization::BaselineOne => raw_baseline,
    };
    if !(divisor > 0.0) {
        return Err(Error::numerical(format!(
            "cannot normalise by a non-positive baseline ({divisor})"
        )));
    }
    let rates = taus
        .par_iter()
        .map(|&t| {
            let net = build_cascade_network(t, setup.tau2, setup.placement, sample.clone())?;
            Ok(coincidence_oracle(&net, &state)? / divisor)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleScan {
        taus: taus.to_vec(),
        rates,
        raw_baseline,
    })
}
