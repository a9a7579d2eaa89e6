use crate::error::{Error, Result};
use crate::units;

use super::PhaseFunction;

/// `n^2(l) = 1 + sum_i B_i l^2 / (l^2 - C_i)` with `l` in um and `C_i` in um^2.
#[derive(Clone, Debug, PartialEq)]
pub struct SellmeierModel {
    pub material: String,
    pub b: Vec<f64>,
    pub c_um2: Vec<f64>,
    pub min_um: f64,
    pub max_um: f64,
}

impl SellmeierModel {
    pub fn new(
        material: impl Into<String>,
        b: Vec<f64>,
        c_um2: Vec<f64>,
        (min_um, max_um): (f64, f64),
    ) -> Result<Self> {
        let material = material.into();
        if b.len() != c_um2.len() {
            return Err(Error::invalid(format!(
                "{material}: {} B coefficients but {} C coefficients",
                b.len(),
                c_um2.len()
            )));
        }
        if b.iter().chain(&c_um2).any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("{material}: non-finite Sellmeier coefficient")));
        }
        if !(min_um.is_finite() && max_um.is_finite() && 0.0 < min_um && min_um < max_um) {
            return Err(Error::invalid(format!(
                "{material}: invalid validity range [{min_um}, {max_um}] um"
            )));
        }
        let model = Self {
            material,
            b,
            c_um2,
            min_um,
            max_um,
        };
        // Lossless-slab assumption: n real and >= 1 across the validity range.
        const PROBES: usize = 257;
        for i in 0..PROBES {
            let t = i as f64 / (PROBES - 1) as f64;
            let l = model.min_um * (model.max_um / model.min_um).powf(t);
            let n2 = model.index_squared(l);
            if !(n2.is_finite() && n2 >= 1.0) {
                return Err(Error::invalid(format!(
                    "{}: n^2 = {n2} at {l:.4} um; the model must give a real index >= 1 \
                     across its validity range",
                    model.material
                )));
            }
        }
        Ok(model)
    }

    /// `n = 1` everywhere inside the given range.
    pub fn vacuum() -> Self {
        Self {
            material: "vacuum".into(),
            b: Vec::new(),
            c_um2: Vec::new(),
            min_um: 1e-2,
            max_um: 1e3,
        }
    }

    fn index_squared(&self, wavelength_um: f64) -> f64 {
        let l2 = wavelength_um * wavelength_um;
        1.0 + self
            .b
            .iter()
            .zip(&self.c_um2)
            .map(|(b, c)| b * l2 / (l2 - c))
            .sum::<f64>()
    }

    pub fn refractive_index(&self, wavelength_um: f64) -> Result<f64> {
        if !(self.min_um..=self.max_um).contains(&wavelength_um) {
            return Err(Error::MaterialRange {
                material: self.material.clone(),
                wavelength_um,
                min_um: self.min_um,
                max_um: self.max_um,
            });
        }
        Ok(self.index_squared(wavelength_um).sqrt())
    }
}

/// Plane-parallel slab crossed at normal incidence: `phi = n(w) w L / c`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabSpec {
    model: SellmeierModel,
    thickness_m: f64,
    transit_ps: f64,
}

impl SlabSpec {
    pub fn new(model: SellmeierModel, thickness_m: f64) -> Result<Self> {
        if !(thickness_m.is_finite() && thickness_m >= 0.0) {
            return Err(Error::invalid(format!(
                "slab thickness must be non-negative, got {thickness_m} m"
            )));
        }
        Ok(Self {
            transit_ps: units::transit_time_ps(thickness_m),
            model,
            thickness_m,
        })
    }

    pub fn model(&self) -> &SellmeierModel {
        &self.model
    }

    pub fn thickness_m(&self) -> f64 {
        self.thickness_m
    }

    pub fn slab_phase(&self, omega: f64) -> Result<f64> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::invalid(format!(
                "slab phase needs a positive frequency, got {omega} rad/ps"
            )));
        }
        let n = self.model.refractive_index(units::wavelength_um(omega))?;
        Ok(n * omega * self.transit_ps)
    }
}

impl PhaseFunction for SlabSpec {
    fn phase(&self, omega: f64) -> Result<f64> {
        self.slab_phase(omega)
    }

    fn describe(&self) -> String {
        format!("slab({}, {} mm)", self.model.material, self.thickness_m * 1e3)
    }
}
