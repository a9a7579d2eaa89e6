//! Dispersive phase `phi(w)` of a sample, as a Taylor polynomial about the
//! degenerate frequency or as a material slab.

mod fit;
mod materials;
mod sellmeier;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use fit::{fit_taylor, TaylorFit, FIT_STEP_FRACTION, MAX_FIT_ORDER};
pub use materials::{normalize_material_id, Material, MaterialsDb, BUILTIN_MATERIALS_LABEL};
pub use sellmeier::{SellmeierModel, SlabSpec};

/// Default Taylor order (group delay, GDD and third-order terms).
pub const DEFAULT_TAYLOR_ORDER: usize = 3;

/// Spectral phase of a lossless element.
///
/// Frequencies are absolute angular frequencies in rad/ps; the result is in
/// radians.
pub trait PhaseFunction: Send + Sync + fmt::Debug {
    fn phase(&self, omega: f64) -> Result<f64>;

    /// Short human-readable description for logs and CSV metadata.
    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

pub type SharedPhase = Arc<dyn PhaseFunction>;

impl<T: PhaseFunction + ?Sized> PhaseFunction for Arc<T> {
    fn phase(&self, omega: f64) -> Result<f64> {
        (**self).phase(omega)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// `phi = sum_k c_k (w - w_ref)^k`, with `c_k` in rad/ps^k (so `c_1` is the
/// group delay in ps and `c_2` is half the group delay dispersion in ps^2).
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorPhase {
    reference_frequency: f64,
    coefficients: Vec<f64>,
}

impl TaylorPhase {
    pub fn new(reference_frequency: f64, coefficients: Vec<f64>) -> Result<Self> {
        if !(reference_frequency.is_finite() && reference_frequency > 0.0) {
            return Err(Error::invalid(format!(
                "reference frequency must be positive, got {reference_frequency} rad/ps"
            )));
        }
        if coefficients.is_empty() {
            return Err(Error::invalid("Taylor phase needs at least one coefficient"));
        }
        if let Some(k) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("Taylor coefficient c{k} is not finite")));
        }
        Ok(Self {
            reference_frequency,
            coefficients,
        })
    }

    /// The identically zero phase.
    pub fn zero(reference_frequency: f64) -> Self {
        Self::new(reference_frequency, vec![0.0]).expect("valid reference frequency")
    }

    pub fn reference_frequency(&self) -> f64 {
        self.reference_frequency
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        self.coefficients.get(k).copied().unwrap_or(0.0)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Keeps only the even-order coefficients (odd ones set to zero).
    pub fn even_part(&self) -> Self {
        self.filtered(|k| k % 2 == 0)
    }

    /// Keeps only the odd-order coefficients (even ones, including `c_0`, set to zero).
    pub fn odd_part(&self) -> Self {
        self.filtered(|k| k % 2 == 1)
    }

    fn filtered(&self, keep: impl Fn(usize) -> bool) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, &c)| if keep(k) { c } else { 0.0 })
            .collect();
        Self {
            reference_frequency: self.reference_frequency,
            coefficients,
        }
    }

    /// Polynomial value at absolute frequency `omega`.
    pub fn taylor_phase(&self, omega: f64) -> f64 {
        let x = omega - self.reference_frequency;
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

impl PhaseFunction for TaylorPhase {
    fn phase(&self, omega: f64) -> Result<f64> {
        Ok(self.taylor_phase(omega))
    }

    fn describe(&self) -> String {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| format!("c{k}={c:e}"))
            .collect();
        format!("taylor({})", terms.join(", "))
    }
}

/// Sum and difference of the phases at the signal and idler frequencies:
/// `even_sum = phi(w0 + w) + phi(w0 - w)` carries only even Taylor orders,
/// `odd_diff = phi(w0 + w) - phi(w0 - w)` only odd ones.
pub fn even_odd_split(
    phase: &dyn PhaseFunction,
    center_frequency: f64,
    detuning: f64,
) -> Result<(f64, f64)> {
    let plus = phase.phase(center_frequency + detuning)?;
    let minus = phase.phase(center_frequency - detuning)?;
    Ok((plus + minus, plus - minus))
}

/// Largest |d phi / d w| [ps] over `center +- half_width`, sampled on 129
/// points with a central difference. Used to size quadrature grids.
pub fn max_group_delay(
    phase: &dyn PhaseFunction,
    center_frequency: f64,
    half_width: f64,
) -> Result<f64> {
    const POINTS: usize = 129;
    let delta = half_width / 512.0;
    let mut worst: f64 = 0.0;
    for i in 0..POINTS {
        let w = center_frequency - half_width + 2.0 * half_width * i as f64 / (POINTS - 1) as f64;
        let d = (phase.phase(w + delta)? - phase.phase(w - delta)?) / (2.0 * delta);
        if !d.is_finite() {
            return Err(Error::numerical("group delay estimate is not finite"));
        }
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    const W0: f64 = 2354.564459136067;

    #[test]
    fn taylor_phase_examples() {
        let zero = TaylorPhase::new(W0, vec![0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(zero.taylor_phase(W0 + 3.0), 0.0);
        let linear = TaylorPhase::new(10.0, vec![0.0, 1.0]).unwrap();
        assert_eq!(linear.taylor_phase(12.0), 2.0);
        let quadratic = TaylorPhase::new(10.0, vec![0.0, 0.0, 0.5]).unwrap();
        assert_eq!(quadratic.taylor_phase(12.0), 2.0);
    }

    #[test]
    fn taylor_validation() {
        assert!(TaylorPhase::new(W0, vec![]).is_err());
        assert!(TaylorPhase::new(W0, vec![1.0, f64::INFINITY]).is_err());
        assert!(TaylorPhase::new(0.0, vec![1.0]).is_err());
    }

    #[test]
    fn split_of_pure_orders() {
        let c2 = TaylorPhase::new(W0, vec![0.0, 0.0, 0.7]).unwrap();
        let c1 = TaylorPhase::new(W0, vec![0.0, 1.5]).unwrap();
        for &w in &[0.0, 0.3, 12.0, 250.0] {
            let (_, odd) = even_odd_split(&c2, W0, w).unwrap();
            assert!(odd.abs() <= 1e-9 * (1.0 + 0.7 * w * w), "{odd}");
            let (even, odd) = even_odd_split(&c1, W0, w).unwrap();
            assert!(even.abs() < 1e-9);
            assert!((odd - 3.0 * w).abs() < 1e-9);
        }
    }

    #[test]
    fn even_and_odd_parts() {
        let tp = TaylorPhase::new(W0, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(tp.even_part().coefficients(), &[1.0, 0.0, 3.0, 0.0]);
        assert_eq!(tp.odd_part().coefficients(), &[0.0, 2.0, 0.0, 4.0]);
    }

    #[test]
    fn group_delay_of_linear_phase() {
        let tp = TaylorPhase::new(W0, vec![0.0, 27.0]).unwrap();
        let gd = max_group_delay(&tp, W0, 600.0).unwrap();
        assert!((gd - 27.0).abs() < 1e-6);
    }
}
