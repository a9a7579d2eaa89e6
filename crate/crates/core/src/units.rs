//! Physical constants and unit conversions.
//!
//! Internally every angular frequency is in rad/ps and every delay in ps, so
//! products such as `omega * tau` stay O(1)..O(1e5) instead of mixing 1e15
//! with 1e-12. Conversions happen only at API boundaries.

use std::f64::consts::PI;

/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Speed of light in um/ps, handy for wavelength conversions.
pub const SPEED_OF_LIGHT_UM_PER_PS: f64 = SPEED_OF_LIGHT * 1e-6;

pub const PS_PER_S: f64 = 1e12;

pub fn rad_per_s_to_rad_per_ps(omega: f64) -> f64 {
    omega / PS_PER_S
}

pub fn rad_per_ps_to_rad_per_s(omega: f64) -> f64 {
    omega * PS_PER_S
}

pub fn seconds_to_ps(t: f64) -> f64 {
    t * PS_PER_S
}

pub fn ps_to_seconds(t: f64) -> f64 {
    t / PS_PER_S
}

/// Vacuum wavelength [um] of an angular frequency given in rad/ps.
pub fn wavelength_um(omega_rad_per_ps: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_UM_PER_PS / omega_rad_per_ps
}

/// Angular frequency [rad/ps] of a vacuum wavelength given in um.
pub fn angular_frequency_from_um(wavelength_um: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_UM_PER_PS / wavelength_um
}

/// Free-space transit time [ps] over `length_m` metres.
pub fn transit_time_ps(length_m: f64) -> f64 {
    length_m / SPEED_OF_LIGHT * PS_PER_S
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelength_round_trip() {
        let w = angular_frequency_from_um(0.8);
        assert!((wavelength_um(w) - 0.8).abs() < 1e-15);
        assert!((w - 2354.564459136067).abs() < 1e-9);
    }
}
