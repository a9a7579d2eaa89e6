//! Biphoton spectral amplitude `f(w)` and the detuning grid used to integrate
//! over it.
//!
//! Detunings are measured from the degenerate frequency (half the pump
//! frequency): the signal photon sits at `center + w`, the idler at
//! `center - w`.

use std::f64::consts::{LN_2, PI};
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units;

/// Minimum number of samples in a tabulated spectrum.
pub const MIN_TABULATED_SAMPLES: usize = 8;

/// Default number of detuning grid points.
pub const DEFAULT_GRID_POINTS: usize = 8192;

/// Grid half-width in units of the RMS bandwidth.
pub const DEFAULT_HALF_WIDTH_RMS: f64 = 5.0;

#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumKind {
    /// Real gaussian amplitude; `fwhm_bandwidth` [rad/ps] is the full width at
    /// half maximum of the intensity `|f|^2`.
    Gaussian { fwhm_bandwidth: f64 },
    /// Complex samples, linearly interpolated between strictly increasing
    /// detunings [rad/ps].
    Tabulated {
        detunings: Vec<f64>,
        amplitudes: Vec<Complex64>,
    },
}

/// Spectral amplitude of a frequency-anticorrelated photon pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralAmplitude {
    center_frequency: f64,
    kind: SpectrumKind,
}

impl SpectralAmplitude {
    /// Gaussian spectrum with centre and intensity FWHM both in rad/ps.
    pub fn gaussian(center_frequency: f64, fwhm_bandwidth: f64) -> Result<Self> {
        check_center(center_frequency)?;
        if !(fwhm_bandwidth.is_finite() && fwhm_bandwidth > 0.0) {
            return Err(Error::invalid(format!(
                "gaussian FWHM bandwidth must be positive and finite, got {fwhm_bandwidth}"
            )));
        }
        Ok(Self {
            center_frequency,
            kind: SpectrumKind::Gaussian { fwhm_bandwidth },
        })
    }

    /// Gaussian spectrum from a centre wavelength and an intensity FWHM in
    /// wavelength, both in metres. The bandwidth conversion is first order:
    /// `dw = 2 pi c dl / l0^2`.
    pub fn make_gaussian(center_wavelength: f64, fwhm_wavelength: f64) -> Result<Self> {
        if !(center_wavelength.is_finite() && center_wavelength > 0.0) {
            return Err(Error::invalid(format!(
                "center wavelength must be positive, got {center_wavelength} m"
            )));
        }
        if !(fwhm_wavelength.is_finite() && fwhm_wavelength > 0.0 && fwhm_wavelength < center_wavelength) {
            return Err(Error::invalid(format!(
                "FWHM wavelength must lie in (0, {center_wavelength}) m, got {fwhm_wavelength} m"
            )));
        }
        let two_pi_c = 2.0 * PI * units::SPEED_OF_LIGHT;
        let center = two_pi_c / center_wavelength;
        let fwhm = two_pi_c * fwhm_wavelength / (center_wavelength * center_wavelength);
        Self::gaussian(
            units::rad_per_s_to_rad_per_ps(center),
            units::rad_per_s_to_rad_per_ps(fwhm),
        )
    }

    pub fn tabulated(
        center_frequency: f64,
        detunings: Vec<f64>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        check_center(center_frequency)?;
        if detunings.len() != amplitudes.len() {
            return Err(Error::invalid(format!(
                "tabulated spectrum has {} detunings but {} amplitudes",
                detunings.len(),
                amplitudes.len()
            )));
        }
        if detunings.len() < MIN_TABULATED_SAMPLES {
            return Err(Error::invalid(format!(
                "tabulated spectrum needs at least {MIN_TABULATED_SAMPLES} samples, got {}",
                detunings.len()
            )));
        }
        if detunings.iter().any(|w| !w.is_finite())
            || amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::invalid("tabulated spectrum contains non-finite values"));
        }
        if let Some(i) = detunings.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "tabulated detunings must be strictly increasing (index {})",
                i + 1
            )));
        }
        let spectrum = Self {
            center_frequency,
            kind: SpectrumKind::Tabulated {
                detunings,
                amplitudes,
            },
        };
        let (norm, _, _) = spectrum.moments();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::invalid("tabulated spectrum has zero norm"));
        }
        Ok(spectrum)
    }

    /// Reads a tabulated spectrum from a text file with columns
    /// `detuning [rad/ps], real [, imag]`. Blank lines and `#` comments are
    /// ignored; columns may be separated by whitespace or commas.
    pub fn load_tabulated(path: impl AsRef<Path>, center_frequency: f64) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut detunings = Vec::new();
        let mut amplitudes = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message,
            };
            let cols = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| parse_err(format!("`{s}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            match cols.as_slice() {
                [w, re] => {
                    detunings.push(*w);
                    amplitudes.push(Complex64::new(*re, 0.0));
                }
                [w, re, im] => {
                    detunings.push(*w);
                    amplitudes.push(Complex64::new(*re, *im));
                }
                _ => {
                    return Err(parse_err(format!(
                        "expected 2 or 3 columns, found {}",
                        cols.len()
                    )))
                }
            }
        }
        Self::tabulated(center_frequency, detunings, amplitudes)
    }

    /// Degenerate frequency `W0` [rad/ps].
    pub fn center_frequency(&self) -> f64 {
        self.center_frequency
    }

    /// Degenerate frequency `W0` [rad/s].
    pub fn center_frequency_si(&self) -> f64 {
        units::rad_per_ps_to_rad_per_s(self.center_frequency)
    }

    pub fn kind(&self) -> &SpectrumKind {
        &self.kind
    }

    /// Intensity FWHM [rad/ps] for the gaussian kind.
    pub fn fwhm_bandwidth(&self) -> Option<f64> {
        match self.kind {
            SpectrumKind::Gaussian { fwhm_bandwidth } => Some(fwhm_bandwidth),
            SpectrumKind::Tabulated { .. } => None,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.kind, SpectrumKind::Gaussian { .. })
    }

    /// Amplitude at detuning `w` [rad/ps].
    pub fn evaluate(&self, w: f64) -> Result<Complex64> {
        match &self.kind {
            SpectrumKind::Gaussian { fwhm_bandwidth } => {
                let x = w / fwhm_bandwidth;
                Ok(Complex64::new((-2.0 * LN_2 * x * x).exp(), 0.0))
            }
            SpectrumKind::Tabulated {
                detunings,
                amplitudes,
            } => {
                let (lo, hi) = (detunings[0], detunings[detunings.len() - 1]);
                if !(lo..=hi).contains(&w) {
                    return Err(Error::OutOfRange {
                        what: "tabulated spectrum detuning [rad/ps]",
                        value: w,
                        min: lo,
                        max: hi,
                    });
                }
                let i = detunings.partition_point(|&d| d <= w);
                if i == detunings.len() {
                    return Ok(amplitudes[i - 1]);
                }
                let (w0, w1) = (detunings[i - 1], detunings[i]);
                let t = (w - w0) / (w1 - w0);
                Ok(amplitudes[i - 1] * (1.0 - t) + amplitudes[i] * t)
            }
        }
    }

    /// Detuning range on which the amplitude is defined.
    pub fn support(&self) -> Option<(f64, f64)> {
        match &self.kind {
            SpectrumKind::Gaussian { .. } => None,
            SpectrumKind::Tabulated { detunings, .. } => {
                Some((detunings[0], detunings[detunings.len() - 1]))
            }
        }
    }

    /// Mean detuning of `|f|^2` [rad/ps].
    pub fn mean_detuning(&self) -> f64 {
        self.moments().1
    }

    /// RMS width of `|f|^2` about its mean [rad/ps].
    pub fn rms_bandwidth(&self) -> f64 {
        self.moments().2
    }

    fn moments(&self) -> (f64, f64, f64) {
        match &self.kind {
            SpectrumKind::Gaussian { fwhm_bandwidth } => {
                // |f|^2 = exp(-4 ln2 w^2 / dw^2): sigma = dw / (2 sqrt(2 ln2)).
                let sigma = fwhm_bandwidth / (2.0 * (2.0 * LN_2).sqrt());
                (sigma * (2.0 * PI).sqrt(), 0.0, sigma)
            }
            SpectrumKind::Tabulated {
                detunings,
                amplitudes,
            } => {
                // |f|^2 is piecewise quadratic under linear interpolation; a
                // refined trapezoid is plenty for a grid-sizing statistic.
                const SUB: usize = 16;
                let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
                for i in 0..detunings.len() - 1 {
                    let (w0, w1) = (detunings[i], detunings[i + 1]);
                    let h = (w1 - w0) / SUB as f64;
                    for j in 0..=SUB {
                        let t = j as f64 / SUB as f64;
                        let w = w0 + (w1 - w0) * t;
                        let a = amplitudes[i] * (1.0 - t) + amplitudes[i + 1] * t;
                        let wt = if j == 0 || j == SUB { 0.5 * h } else { h };
                        let p = a.norm_sqr() * wt;
                        m0 += p;
                        m1 += p * w;
                        m2 += p * w * w;
                    }
                }
                let mean = m1 / m0;
                let var = (m2 / m0 - mean * mean).max(0.0);
                (m0, mean, var.sqrt())
            }
        }
    }

    /// Two-photon coherence time [ps]: the FWHM of
    /// `|int f(w) f*(-w) exp(-2 i w tau) dw|` as a function of `tau`, evaluated
    /// on the default grid.
    pub fn coherence_time(&self) -> Result<f64> {
        let grid = FrequencyGrid::covering(self, DEFAULT_GRID_POINTS)?;
        let samples = grid.sample(self)?;
        let weighted: Vec<Complex64> = (0..grid.len())
            .map(|k| samples[k] * samples[grid.mirror(k)].conj() * grid.weight(k))
            .collect();
        let envelope = |tau: f64| -> f64 {
            grid.detunings()
                .zip(&weighted)
                .map(|(w, g)| g * Complex64::from_polar(1.0, -2.0 * w * tau))
                .sum::<Complex64>()
                .norm()
        };

        let span = 20.0 / self.rms_bandwidth();
        const COARSE: usize = 2000;
        let step = 2.0 * span / COARSE as f64;
        let taus: Vec<f64> = (0..=COARSE).map(|i| -span + step * i as f64).collect();
        let values: Vec<f64> = taus.iter().map(|&t| envelope(t)).collect();
        let (peak_idx, &peak) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty scan");
        if !(peak.is_finite() && peak > 0.0) {
            return Err(Error::numerical("two-photon envelope vanishes"));
        }
        let half = 0.5 * peak;

        let right = (peak_idx..values.len()).find(|&i| values[i] < half);
        let left = (0..=peak_idx).rev().find(|&i| values[i] < half);
        let (Some(r), Some(l)) = (right, left) else {
            return Err(Error::numerical(
                "two-photon envelope does not fall to half maximum inside the search window",
            ));
        };
        let bisect = |mut inside: f64, mut outside: f64| {
            for _ in 0..80 {
                let mid = 0.5 * (inside + outside);
                if envelope(mid) >= half {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            0.5 * (inside + outside)
        };
        let t_right = bisect(taus[r - 1], taus[r]);
        let t_left = bisect(taus[l + 1], taus[l]);
        Ok(t_right - t_left)
    }
}

fn check_center(center: f64) -> Result<()> {
    if center.is_finite() && center > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "center frequency must be positive and finite, got {center} rad/ps"
        )))
    }
}

/// Uniform detuning grid, symmetric about zero: point `k` and point
/// `len - 1 - k` are exact negatives of each other.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyGrid {
    half_width: f64,
    count: usize,
    step: f64,
}

impl FrequencyGrid {
    pub fn new(half_width: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 points, got {count}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid(format!(
                "grid half-width must be positive, got {half_width} rad/ps"
            )));
        }
        Ok(Self {
            half_width,
            count,
            step: 2.0 * half_width / (count - 1) as f64,
        })
    }

    /// Grid of `count` points whose half-width spans the mean detuning plus
    /// five RMS bandwidths of `spectrum`.
    pub fn covering(spectrum: &SpectralAmplitude, count: usize) -> Result<Self> {
        let half_width =
            spectrum.mean_detuning().abs() + DEFAULT_HALF_WIDTH_RMS * spectrum.rms_bandwidth();
        let grid = Self::new(half_width, count)?;
        grid.check_support(spectrum)?;
        Ok(grid)
    }

    /// Grid wide enough for `spectrum` and fine enough that the quadrature's
    /// alias period `pi / step` in delay exceeds `max_delay` [ps] with margin.
    /// Never coarser than the default point count; counts are powers of two.
    pub fn for_delay_budget(spectrum: &SpectralAmplitude, max_delay: f64) -> Result<Self> {
        if !(max_delay.is_finite() && max_delay >= 0.0) {
            return Err(Error::invalid(format!(
                "delay budget must be finite and non-negative, got {max_delay} ps"
            )));
        }
        let base = Self::covering(spectrum, DEFAULT_GRID_POINTS)?;
        let required = 1.2 * max_delay + 50.0 / spectrum.rms_bandwidth();
        let mut count = DEFAULT_GRID_POINTS;
        while PI * (count - 1) as f64 / (2.0 * base.half_width) < required {
            count *= 2;
            if count > 1 << 26 {
                return Err(Error::numerical(format!(
                    "delay budget {max_delay} ps needs an unreasonably fine grid"
                )));
            }
        }
        Self::new(base.half_width, count)
    }

    /// Same half-width, `factor` times (roughly) the resolution.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.half_width, (self.count - 1) * factor.max(1) + 1)
    }

    pub fn check_support(&self, spectrum: &SpectralAmplitude) -> Result<()> {
        if let Some((lo, hi)) = spectrum.support() {
            if lo > -self.half_width || hi < self.half_width {
                return Err(Error::invalid(format!(
                    "tabulated spectrum spans [{lo}, {hi}] rad/ps but the grid needs \
                     [-{w}, {w}] rad/ps",
                    w = self.half_width
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Delay period [ps] after which `exp(-2 i w tau)` sums alias.
    pub fn alias_period(&self) -> f64 {
        PI / self.step
    }

    pub fn detuning(&self, k: usize) -> f64 {
        (k as f64 - 0.5 * (self.count - 1) as f64) * self.step
    }

    pub fn detunings(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.detuning(k))
    }

    /// Index of the point at the negated detuning.
    pub fn mirror(&self, k: usize) -> usize {
        self.count - 1 - k
    }

    /// Trapezoid weight of point `k`.
    pub fn weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.count {
            0.5 * self.step
        } else {
            self.step
        }
    }

    pub fn sample(&self, spectrum: &SpectralAmplitude) -> Result<Vec<Complex64>> {
        self.check_support(spectrum)?;
        self.detunings().map(|w| spectrum.evaluate(w)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn znse() -> SpectralAmplitude {
        SpectralAmplitude::make_gaussian(800e-9, 100e-9).unwrap()
    }

    #[test]
    fn make_gaussian_conversion() {
        let f = znse();
        let c = units::SPEED_OF_LIGHT;
        let center = 2.0 * PI * c / 800e-9;
        let fwhm = 2.0 * PI * c * 100e-9 / (800e-9 * 800e-9);
        assert!((f.center_frequency_si() - center).abs() / center < 1e-14);
        assert!((f.center_frequency_si() - 2.3546e15).abs() < 1e11);
        let got = units::rad_per_ps_to_rad_per_s(f.fwhm_bandwidth().unwrap());
        assert!((got - fwhm).abs() / fwhm < 1e-14);
        assert!((got - 2.9432e14).abs() < 1e10);
    }

    #[test]
    fn make_gaussian_rejects_bad_inputs() {
        assert!(SpectralAmplitude::make_gaussian(800e-9, 0.0).is_err());
        assert!(SpectralAmplitude::make_gaussian(800e-9, -1e-9).is_err());
        assert!(SpectralAmplitude::make_gaussian(800e-9, 800e-9).is_err());
        assert!(SpectralAmplitude::make_gaussian(-800e-9, 10e-9).is_err());
        assert!(SpectralAmplitude::make_gaussian(f64::NAN, 10e-9).is_err());
    }

    #[test]
    fn narrowband_limit_is_spike_on_fixed_grid() {
        let wide = znse();
        let grid = FrequencyGrid::covering(&wide, 1025).unwrap();
        let narrow = SpectralAmplitude::make_gaussian(800e-9, 1e-15).unwrap();
        let samples = grid.sample(&narrow).unwrap();
        // Only the sample nearest zero detuning is non-negligible.
        let big = samples.iter().filter(|a| a.norm() > 1e-12).count();
        assert_eq!(big, 1);
        assert!(narrow.fwhm_bandwidth().unwrap() < 1e-5);
    }

    #[test]
    fn gaussian_peak_and_half_intensity() {
        let f = znse();
        let dw = f.fwhm_bandwidth().unwrap();
        assert_eq!(f.evaluate(0.0).unwrap(), Complex64::new(1.0, 0.0));
        // FWHM is defined on the intensity |f|^2.
        let a = f.evaluate(0.5 * dw).unwrap();
        assert!((a.norm_sqr() - 0.5).abs() < 1e-15);
        assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn gaussian_is_even_on_grid() {
        let f = znse();
        let grid = FrequencyGrid::covering(&f, 4096).unwrap();
        let s = grid.sample(&f).unwrap();
        for k in 0..grid.len() {
            assert_eq!(s[k], s[grid.mirror(k)]);
        }
    }

    #[test]
    fn grid_is_symmetric() {
        for n in [2usize, 3, 8, 9, 1000, 8193] {
            let g = FrequencyGrid::new(3.7, n).unwrap();
            for k in 0..n {
                assert_eq!(g.detuning(k), -g.detuning(g.mirror(k)));
            }
            assert!((g.detuning(0) + 3.7).abs() < 1e-12);
            assert!((g.detuning(n - 1) - 3.7).abs() < 1e-12);
        }
        assert!(FrequencyGrid::new(1.0, 1).is_err());
        assert!(FrequencyGrid::new(0.0, 10).is_err());
    }

    #[test]
    fn tabulated_interpolation_matches_generator() {
        // Skewed, chirped generator; linear interpolation error is O(h^2).
        let gen = |w: f64| {
            let g = (-(w - 0.3) * (w - 0.3) / 2.0).exp() * (1.0 + 0.2 * w);
            Complex64::from_polar(g.abs(), 0.1 * w * w * w)
        };
        let ws: Vec<f64> = (0..=400).map(|i| -8.0 + 0.04 * i as f64).collect();
        let amps: Vec<Complex64> = ws.iter().map(|&w| gen(w)).collect();
        let f = SpectralAmplitude::tabulated(2000.0, ws.clone(), amps).unwrap();
        // At the nodes the table is exact.
        for &w in ws.iter().step_by(37) {
            assert!((f.evaluate(w).unwrap() - gen(w)).norm() < 1e-15);
        }
        // Between nodes: bounded by h^2/8 * max|f''|.
        for &w in &[-1.23, 0.017, 0.55, 2.345] {
            let err = (f.evaluate(w).unwrap() - gen(w)).norm();
            assert!(err < 1e-3, "w = {w}: err {err}");
        }
        assert!(f.evaluate(-8.5).is_err());
        assert!(f.evaluate(8.01).is_err());
    }

    #[test]
    fn tabulated_validation() {
        let w: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let a = vec![Complex64::new(1.0, 0.0); 8];
        assert!(SpectralAmplitude::tabulated(1.0, w.clone(), a.clone()).is_ok());
        assert!(SpectralAmplitude::tabulated(1.0, w[..7].to_vec(), a[..7].to_vec()).is_err());
        let mut bad = w.clone();
        bad[4] = bad[3];
        assert!(SpectralAmplitude::tabulated(1.0, bad, a.clone()).is_err());
        assert!(SpectralAmplitude::tabulated(1.0, w.clone(), vec![Complex64::new(0.0, 0.0); 8]).is_err());
        assert!(SpectralAmplitude::tabulated(1.0, w, a[..6].to_vec()).is_err());
    }

    #[test]
    fn load_tabulated_file() {
        let dir = std::env::temp_dir().join(format!("disperscan-spec-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("spec.txt");
        let mut text = String::from("# detuning re im\n");
        for i in 0..10 {
            let w = -4.5 + i as f64;
            text.push_str(&format!("{w}, {} {}\n", (-w * w).exp(), 0.1 * w));
        }
        text.push_str("\n5.5 0.0\n");
        fs::write(&path, text).unwrap();
        let f = SpectralAmplitude::load_tabulated(&path, 100.0).unwrap();
        let v = f.evaluate(-4.5).unwrap();
        assert!((v.im + 0.45).abs() < 1e-15);
        assert_eq!(f.support(), Some((-4.5, 5.5)));

        fs::write(&path, "1 2 3 4\n").unwrap();
        match SpectralAmplitude::load_tabulated(&path, 100.0) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn coherence_time_matches_closed_form() {
        // |f|^2 gaussian with intensity FWHM dw: envelope FWHM = 4 ln2 / dw.
        let f = znse();
        let tc = f.coherence_time().unwrap();
        let expected = 4.0 * LN_2 / f.fwhm_bandwidth().unwrap();
        assert!((tc - expected).abs() / expected < 1e-6, "{tc} vs {expected}");
    }

    #[test]
    fn coherence_time_decreases_with_bandwidth() {
        let ladder = [10e-9, 30e-9, 60e-9, 100e-9, 150e-9];
        let times: Vec<f64> = ladder
            .iter()
            .map(|&d| SpectralAmplitude::make_gaussian(800e-9, d).unwrap().coherence_time().unwrap())
            .collect();
        assert!(times.windows(2).all(|w| w[1] < w[0]), "{times:?}");
    }

    #[test]
    fn doubling_bandwidth_halves_coherence_time() {
        let a = SpectralAmplitude::gaussian(2000.0, 100.0).unwrap().coherence_time().unwrap();
        let b = SpectralAmplitude::gaussian(2000.0, 200.0).unwrap().coherence_time().unwrap();
        assert!((a / b - 2.0).abs() < 0.02);
    }

    #[test]
    fn delay_budget_grid_avoids_aliasing() {
        let f = znse();
        let g = FrequencyGrid::for_delay_budget(&f, 115.0).unwrap();
        assert!(g.len().is_power_of_two());
        assert!(g.alias_period() > 1.2 * 115.0);
        let small = FrequencyGrid::for_delay_budget(&f, 0.0).unwrap();
        assert_eq!(small.len(), DEFAULT_GRID_POINTS);
    }
}
