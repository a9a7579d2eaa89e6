use num_complex::Complex64;

use crate::error::Result;
use crate::spectrum::{FrequencyGrid, SpectralAmplitude};

use super::network::{ModeNetwork, TransferMatrix};

/// Frequency-anticorrelated photon pair from a monochromatic pump: the
/// signal at `w0 + v` enters the network's first input and the idler at
/// `w0 - v` the second, with joint amplitude `f(v)`.
#[derive(Clone, Debug)]
pub struct TwoPhotonState {
    spectrum: SpectralAmplitude,
    grid: FrequencyGrid,
    samples: Vec<Complex64>,
}

impl TwoPhotonState {
    pub fn new(spectrum: SpectralAmplitude, grid: FrequencyGrid) -> Result<Self> {
        grid.check_support(&spectrum)?;
        let samples = grid.sample(&spectrum)?;
        Ok(Self {
            spectrum,
            grid,
            samples,
        })
    }

    pub fn spectrum(&self) -> &SpectralAmplitude {
        &self.spectrum
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// `int |f|^2 dv`, the total pair probability.
    pub fn norm(&self) -> f64 {
        (0..self.grid.len())
            .map(|k| self.grid.weight(k) * self.samples[k].norm_sqr())
            .sum()
    }
}

/// Output amplitude `A(w0 + v, w0 - v)` for one ordered pair of output
/// ports, stored on the anticorrelation line where the pair lives.
#[derive(Clone, Debug)]
pub struct TwoPhotonAmplitude {
    pub ports: (usize, usize),
    pub center_frequency: f64,
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
    /// Same amplitude with the exchange term dropped, `|.|^2` summed into the
    /// distinguishable-photon rate.
    direct: Vec<Complex64>,
    exchange: Vec<Complex64>,
}

impl TwoPhotonAmplitude {
    /// Amplitude at absolute frequencies `(w1, w2)`. Zero off the
    /// anticorrelation line or between grid points.
    pub fn at(&self, omega1: f64, omega2: f64) -> Complex64 {
        let v = omega1 - self.center_frequency;
        let off_line = (omega1 + omega2 - 2.0 * self.center_frequency).abs();
        let h = self.grid.step();
        let x = v / h + (self.grid.len() as f64 - 1.0) / 2.0;
        let k = x.round();
        if off_line > 1e-9 * h || (x - k).abs() > 1e-6 || k < 0.0 || k >= self.grid.len() as f64 {
            return Complex64::new(0.0, 0.0);
        }
        self.values[k as usize]
    }

    /// `int |A|^2 dv`.
    pub fn probability(&self) -> f64 {
        self.weighted(|k| self.values[k].norm_sqr())
    }

    /// Rate with the two exchange paths added incoherently.
    pub fn distinguishable_probability(&self) -> f64 {
        self.weighted(|k| self.direct[k].norm_sqr() + self.exchange[k].norm_sqr())
    }

    fn weighted(&self, f: impl Fn(usize) -> f64) -> f64 {
        (0..self.values.len()).map(|k| self.grid.weight(k) * f(k)).sum()
    }
}

fn transfers(net: &ModeNetwork, state: &TwoPhotonState) -> Result<Vec<TransferMatrix>> {
    let center = state.spectrum.center_frequency();
    state
        .grid
        .detunings()
        .map(|v| net.transfer(center + v))
        .collect()
}

fn amplitude_from(
    matrices: &[TransferMatrix],
    net: &ModeNetwork,
    state: &TwoPhotonState,
    ports: (usize, usize),
) -> TwoPhotonAmplitude {
    let [s, i] = net.inputs();
    let (a, b) = ports;
    let n = state.grid.len();
    let mut direct = Vec::with_capacity(n);
    let mut exchange = Vec::with_capacity(n);
    for k in 0..n {
        let m = state.grid.mirror(k);
        let (hi, lo) = (&matrices[k], &matrices[m]);
        // Port a at w0 + v, port b at w0 - v: the w0 + v photon is either the
        // signal (amplitude f(v)) or the idler (amplitude f(-v)).
        direct.push(state.samples[k] * hi.get(a, s) * lo.get(b, i));
        exchange.push(state.samples[m] * hi.get(a, i) * lo.get(b, s));
    }
    let values = direct.iter().zip(&exchange).map(|(d, e)| d + e).collect();
    TwoPhotonAmplitude {
        ports,
        center_frequency: state.spectrum.center_frequency(),
        grid: state.grid.clone(),
        values,
        direct,
        exchange,
    }
}

/// Amplitude for the ordered detector pair `(D1, D2)` of the network.
pub fn two_photon_amplitude(net: &ModeNetwork, state: &TwoPhotonState) -> Result<TwoPhotonAmplitude> {
    let [d1, d2] = net.detectors();
    pair_amplitude(net, state, d1, d2)
}

pub fn pair_amplitude(
    net: &ModeNetwork,
    state: &TwoPhotonState,
    port_a: usize,
    port_b: usize,
) -> Result<TwoPhotonAmplitude> {
    let matrices = transfers(net, state)?;
    Ok(amplitude_from(&matrices, net, state, (port_a, port_b)))
}

/// Probability of one photon at each detector, `int |A_{D1,D2}|^2 dv`.
pub fn coincidence_oracle(net: &ModeNetwork, state: &TwoPhotonState) -> Result<f64> {
    Ok(two_photon_amplitude(net, state)?.probability())
}

/// Probabilities of every ordered output-port pair.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    lines: usize,
    probabilities: Vec<f64>,
}

impl OutcomeTable {
    /// Probability that the `w0 + v` photon exits `a` and the `w0 - v` one exits `b`.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.probabilities[a * self.lines + b]
    }

    /// Probability that one photon leaves by `a` and the other by `b`
    /// (either order; for `a == b` both photons in that port).
    pub fn unordered(&self, a: usize, b: usize) -> f64 {
        if a == b {
            0.5 * self.get(a, a)
        } else {
            0.5 * (self.get(a, b) + self.get(b, a))
        }
    }

    /// Sum over all ports; equals the input norm for a lossless network.
    pub fn total(&self) -> f64 {
        0.5 * self.probabilities.iter().sum::<f64>()
    }
}

pub fn outcome_probabilities(net: &ModeNetwork, state: &TwoPhotonState) -> Result<OutcomeTable> {
    let matrices = transfers(net, state)?;
    let lines = net.lines();
    let mut probabilities = Vec::with_capacity(lines * lines);
    for a in 0..lines {
        for b in 0..lines {
            probabilities.push(amplitude_from(&matrices, net, state, (a, b)).probability());
        }
    }
    Ok(OutcomeTable {
        lines,
        probabilities,
    })
}
