use num_complex::Complex64;

use crate::dispersion::SharedPhase;
use crate::error::{Error, Result};
use crate::interferogram::Placement;

/// Amplitude transmission of a balanced beam splitter.
const T: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Linear optical element acting on one or two lines.
#[derive(Clone, Debug)]
pub enum Element {
    /// Lossless 50/50 splitter, `[[t, r], [r, t]]` with `t = 1/sqrt2`, `r = i/sqrt2`.
    BeamSplitter { first: usize, second: usize },
    /// Free-space delay `exp(i w tau)` [ps].
    Delay { line: usize, delay: f64 },
    /// Dispersive element `exp(i phi(w))`.
    Phase { line: usize, phase: SharedPhase },
}

/// Transfer matrix `M[out][in]` at one frequency, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    size: usize,
    data: Vec<Complex64>,
}

impl TransferMatrix {
    pub fn identity(size: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); size * size];
        for i in 0..size {
            data[i * size + i] = Complex64::new(1.0, 0.0);
        }
        Self { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, out: usize, input: usize) -> Complex64 {
        self.data[out * self.size + input]
    }

    fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.size..(i + 1) * self.size]
    }

    fn scale_row(&mut self, i: usize, z: Complex64) {
        for v in self.row_mut(i) {
            *v *= z;
        }
    }

    fn mix_rows(&mut self, a: usize, b: usize) {
        let r = Complex64::new(0.0, T);
        for j in 0..self.size {
            let (x, y) = (self.data[a * self.size + j], self.data[b * self.size + j]);
            self.data[a * self.size + j] = x * T + y * r;
            self.data[b * self.size + j] = x * r + y * T;
        }
    }

    /// Frobenius norm of `M^dagger M - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.size;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    acc -= 1.0;
                }
                sum += acc.norm_sqr();
            }
        }
        sum.sqrt()
    }
}

/// Spatial modes ("lines") traversed by a sequence of elements. Photons
/// enter on `inputs` and are counted at `detectors`.
#[derive(Clone, Debug)]
pub struct ModeNetwork {
    labels: Vec<String>,
    elements: Vec<Element>,
    inputs: [usize; 2],
    detectors: [usize; 2],
}

impl ModeNetwork {
    pub fn new(labels: Vec<String>, inputs: [usize; 2], detectors: [usize; 2]) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::invalid("a mode network needs at least two lines"));
        }
        if inputs.iter().chain(&detectors).any(|&p| p >= n) {
            return Err(Error::invalid(format!("port index out of range for {n} lines")));
        }
        if inputs[0] == inputs[1] || detectors[0] == detectors[1] {
            return Err(Error::invalid("input and detector ports must be distinct"));
        }
        Ok(Self {
            labels,
            elements: Vec::new(),
            inputs,
            detectors,
        })
    }

    pub fn push(&mut self, element: Element) -> Result<()> {
        let n = self.labels.len();
        let ok = match &element {
            Element::BeamSplitter { first, second } => first < &n && second < &n && first != second,
            Element::Delay { line, delay } => *line < n && delay.is_finite(),
            Element::Phase { line, .. } => *line < n,
        };
        if !ok {
            return Err(Error::invalid(format!("invalid element {element:?}")));
        }
        self.elements.push(element);
        Ok(())
    }

    pub fn lines(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn inputs(&self) -> [usize; 2] {
        self.inputs
    }

    pub fn detectors(&self) -> [usize; 2] {
        self.detectors
    }

    /// Cumulative transfer matrix at absolute frequency `omega` [rad/ps].
    pub fn transfer(&self, omega: f64) -> Result<TransferMatrix> {
        let mut m = TransferMatrix::identity(self.lines());
        for element in &self.elements {
            match element {
                Element::BeamSplitter { first, second } => m.mix_rows(*first, *second),
                Element::Delay { line, delay } => {
                    m.scale_row(*line, Complex64::from_polar(1.0, omega * delay))
                }
                Element::Phase { line, phase } => {
                    let p = phase.phase(omega)?;
                    if !p.is_finite() {
                        return Err(Error::numerical(format!(
                            "phase {} is not finite at {omega} rad/ps",
                            phase.describe()
                        )));
                    }
                    m.scale_row(*line, Complex64::from_polar(1.0, p))
                }
            }
        }
        Ok(m)
    }
}

/// The cascade: the idler (line 1) is delayed by `tau1` and meets the signal
/// (line 0) at the HOM splitter; line 0 then enters the Mach-Zehnder with a
/// vacuum port (line 2), whose line-0 arm is delayed by `tau2`. Detectors sit
/// on lines 0 and 2 after the second MZ splitter. The other HOM output
/// (line 1) is left undetected.
pub fn build_cascade_network(
    tau1: f64,
    tau2: f64,
    placement: Placement,
    sample: SharedPhase,
) -> Result<ModeNetwork> {
    let labels = ["signal", "hom_unused", "mz_vacuum"].map(String::from).to_vec();
    let mut net = ModeNetwork::new(labels, [0, 1], [0, 2])?;
    net.push(Element::Delay { line: 1, delay: tau1 })?;
    if placement == Placement::HomArm {
        net.push(Element::Phase { line: 0, phase: sample.clone() })?;
    }
    net.push(Element::BeamSplitter { first: 0, second: 1 })?;
    if placement == Placement::Between {
        net.push(Element::Phase { line: 0, phase: sample.clone() })?;
    }
    net.push(Element::BeamSplitter { first: 0, second: 2 })?;
    net.push(Element::Delay { line: 0, delay: tau2 })?;
    if placement == Placement::MzArm {
        net.push(Element::Phase { line: 0, phase: sample })?;
    }
    net.push(Element::BeamSplitter { first: 0, second: 2 })?;
    Ok(net)
}

/// Plain Hong-Ou-Mandel: idler delayed by `tau1`, optional sample in the
/// signal arm, one splitter, detectors on both outputs.
pub fn build_hom_network(tau1: f64, sample: Option<SharedPhase>) -> Result<ModeNetwork> {
    let labels = ["signal", "idler"].map(String::from).to_vec();
    let mut net = ModeNetwork::new(labels, [0, 1], [0, 1])?;
    net.push(Element::Delay { line: 1, delay: tau1 })?;
    if let Some(phase) = sample {
        net.push(Element::Phase { line: 0, phase })?;
    }
    net.push(Element::BeamSplitter { first: 0, second: 1 })?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::TaylorPhase;
    use std::sync::Arc;

    #[test]
    fn beam_splitter_matrix() {
        let net = build_hom_network(0.0, None).unwrap();
        let m = net.transfer(1000.0).unwrap();
        assert!((m.get(0, 0) - Complex64::new(T, 0.0)).norm() < 1e-15);
        assert!((m.get(0, 1) - Complex64::new(0.0, T)).norm() < 1e-15);
        assert!((m.get(1, 0) - Complex64::new(0.0, T)).norm() < 1e-15);
    }

    #[test]
    fn cascade_network_is_unitary() {
        let phase: SharedPhase = Arc::new(TaylorPhase::new(2354.0, vec![1.0, 27.0, 1.5e-3, 4e-7]).unwrap());
        for placement in [Placement::HomArm, Placement::Between, Placement::MzArm] {
            let net = build_cascade_network(3.3, 26.0, placement, phase.clone()).unwrap();
            for w in [2000.0, 2354.0, 2700.0] {
                assert!(net.transfer(w).unwrap().unitarity_deviation() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_ports_and_elements() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(ModeNetwork::new(labels.clone(), [0, 0], [0, 1]).is_err());
        assert!(ModeNetwork::new(labels.clone(), [0, 2], [0, 1]).is_err());
        let mut net = ModeNetwork::new(labels, [0, 1], [0, 1]).unwrap();
        assert!(net.push(Element::BeamSplitter { first: 1, second: 1 }).is_err());
        assert!(net.push(Element::Delay { line: 0, delay: f64::NAN }).is_err());
    }
}
