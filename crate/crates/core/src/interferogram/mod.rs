//! Coincidence-rate interferogram of the HOM -> Mach-Zehnder cascade with the
//! sample in the delayed MZ arm, and its split into a constant baseline `B`,
//! the dispersion-free peak `R0`, the even-order term `R_even` and the
//! odd-order term `R_odd`:
//!
//! ```text
//! R_c(t1) = B + R0(t1) - R_even(t1) - R_odd(t1)
//! ```
//!
//! All integrals are trapezoid sums on a [`FrequencyGrid`] that is symmetric
//! about zero detuning.

mod features;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::{max_group_delay, SharedPhase, TaylorPhase};
use crate::error::{Error, Result};
use crate::spectrum::{FrequencyGrid, SpectralAmplitude};

pub use features::{
    classify_regime, dip_asymmetry, fwhm, locate_features, locate_features_in, Feature, Regime,
};

/// Constant part of the MZ two-photon kernel `Phi0 - Phi_alpha - Phi_beta`.
pub const PHI0: f64 = 4.0;

/// Converts the frequency integral of `(Phi0 - Phi_a - Phi_b)(|f|^2 + f f*(-w) e^..)`
/// into the probability that the pair is detected at D1 and D2: three
/// balanced splitters contribute `(1/8)^2` to `|A|^2`, and folding the
/// `w -> -w` partner terms doubles the integrand.
pub const PAIR_SCALE: f64 = 1.0 / 32.0;

/// Where the dispersive sample sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    /// In the signal arm ahead of the HOM beam splitter.
    HomArm,
    /// Between the HOM output port and the MZ input splitter.
    Between,
    /// In the delayed arm of the Mach-Zehnder interferometer.
    MzArm,
}

impl Placement {
    pub fn as_str(self) -> &'static str {
        match self {
            Placement::HomArm => "hom_arm",
            Placement::Between => "between",
            Placement::MzArm => "mz_arm",
        }
    }
}

impl std::str::FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "hom_arm" | "hom" => Ok(Placement::HomArm),
            "between" => Ok(Placement::Between),
            "mz_arm" | "mz" => Ok(Placement::MzArm),
            other => Err(Error::invalid(format!(
                "unknown placement `{other}` (expected hom_arm, between or mz_arm)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Pair-detection probability per unit spectral norm (arbitrary units).
    Raw,
    /// Everything divided by the delay-independent baseline `B`.
    BaselineOne,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::BaselineOne => "baseline_one",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(Normalization::Raw),
            "baseline_one" => Ok(Normalization::BaselineOne),
            other => Err(Error::invalid(format!(
                "unknown normalization `{other}` (expected raw or baseline_one)"
            ))),
        }
    }
}

/// Interferometer geometry and numerics. Delays are in ps.
#[derive(Clone, Debug)]
pub struct SetupConfig {
    pub spectrum: SpectralAmplitude,
    pub sample: SharedPhase,
    pub tau2: f64,
    pub placement: Placement,
    pub grid: FrequencyGrid,
    pub normalization: Normalization,
}

impl SetupConfig {
    pub fn new(
        spectrum: SpectralAmplitude,
        sample: SharedPhase,
        tau2: f64,
        placement: Placement,
        grid: FrequencyGrid,
        normalization: Normalization,
    ) -> Result<Self> {
        if !tau2.is_finite() {
            return Err(Error::invalid(format!("tau2 must be finite, got {tau2}")));
        }
        grid.check_support(&spectrum)?;
        let needed = spectrum.mean_detuning().abs() + spectrum.rms_bandwidth() * 5.0;
        if grid.half_width() < needed * (1.0 - 1e-12) {
            return Err(Error::invalid(format!(
                "grid half-width {} rad/ps does not cover 5 RMS bandwidths ({needed} rad/ps)",
                grid.half_width()
            )));
        }
        Ok(Self {
            spectrum,
            sample,
            tau2,
            placement,
            grid,
            normalization,
        })
    }

    /// Like [`SetupConfig::new`], with a grid sized so that delays up to
    /// `max_abs_tau1` ps are free of quadrature aliasing.
    pub fn with_auto_grid(
        spectrum: SpectralAmplitude,
        sample: SharedPhase,
        tau2: f64,
        placement: Placement,
        normalization: Normalization,
        max_abs_tau1: f64,
    ) -> Result<Self> {
        let probe = FrequencyGrid::covering(&spectrum, 2)?;
        let group_delay =
            max_group_delay(sample.as_ref(), spectrum.center_frequency(), probe.half_width())?;
        let budget = max_abs_tau1.abs() + tau2.abs() + group_delay;
        let grid = FrequencyGrid::for_delay_budget(&spectrum, budget)?;
        Self::new(spectrum, sample, tau2, placement, grid, normalization)
    }

    /// Dispersion-free copy of this setup (same grid).
    pub fn without_sample(&self) -> Self {
        Self {
            sample: std::sync::Arc::new(TaylorPhase::zero(self.spectrum.center_frequency())),
            ..self.clone()
        }
    }

    pub fn with_sample(&self, sample: SharedPhase) -> Self {
        Self {
            sample,
            ..self.clone()
        }
    }

    pub fn with_grid(&self, grid: FrequencyGrid) -> Result<Self> {
        Self::new(
            self.spectrum.clone(),
            self.sample.clone(),
            self.tau2,
            self.placement,
            grid,
            self.normalization,
        )
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.tau2 == 0.0 {
            out.push(
                "tau2 = 0: side dips coincide with the central peak and features may overlap"
                    .to_string(),
            );
        }
        out
    }
}

/// Components at one delay, in the setup's output units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub b: f64,
    pub r0: f64,
    pub r_even: f64,
    pub r_odd: f64,
}

impl Decomposition {
    pub fn total(&self) -> f64 {
        self.b + self.r0 - self.r_even - self.r_odd
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferogramSample {
    pub tau1: f64,
    /// Real part of the direct quadrature of the full integrand.
    pub rc: f64,
    pub b: f64,
    pub r0: f64,
    pub r_even: f64,
    pub r_odd: f64,
    /// Imaginary part left over by that quadrature.
    pub imag_residual: f64,
}

impl InterferogramSample {
    pub fn decomposition(&self) -> Decomposition {
        Decomposition {
            b: self.b,
            r0: self.r0,
            r_even: self.r_even,
            r_odd: self.r_odd,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Interferogram {
    pub setup: SetupConfig,
    pub samples: Vec<InterferogramSample>,
    /// `B` in output units (1 under `baseline_one`).
    pub baseline: f64,
    /// `B` in raw units, whatever the normalization.
    pub raw_baseline: f64,
    pub warnings: Vec<String>,
}

impl Interferogram {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.tau1).collect()
    }

    pub fn rc(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.rc).collect()
    }

    pub fn r0(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.r0).collect()
    }

    pub fn r_even(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.r_even).collect()
    }

    pub fn r_odd(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.r_odd).collect()
    }

    /// `R_c - B` at every sample.
    pub fn deviation(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.rc - self.baseline).collect()
    }

    pub fn max_abs_rc(&self) -> f64 {
        self.samples.iter().map(|s| s.rc.abs()).fold(0.0, f64::max)
    }

    pub fn max_imag_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.imag_residual.abs()).fold(0.0, f64::max)
    }

    /// Largest imaginary residual relative to `max |R_c|`.
    pub fn relative_imag_residual(&self) -> f64 {
        self.max_imag_residual() / self.max_abs_rc()
    }
}

/// Per-frequency factors of the analytic integrand, precomputed once per
/// setup; evaluating a delay is then a single pass over the grid.
#[derive(Clone, Debug)]
pub struct AnalyticEngine {
    detunings: Vec<f64>,
    /// `h_k f(w) f*(-w)`.
    pair: Vec<Complex64>,
    /// `h_k |f(w)|^2`.
    intensity: Vec<f64>,
    /// `Phi_alpha = 2 cos(2 w tau2 + phi(w0 + w) - phi(w0 - w))`.
    alpha: Vec<f64>,
    /// `Phi_beta = 2 cos(2 w0 tau2 + phi(w0 + w) + phi(w0 - w))`.
    beta: Vec<f64>,
    step: f64,
    count: usize,
    raw_baseline: f64,
    divisor: f64,
}

const ANCHOR_EVERY: usize = 64;

impl AnalyticEngine {
    pub fn new(setup: &SetupConfig) -> Result<Self> {
        if setup.placement != Placement::MzArm {
            return Err(Error::UnsupportedConfiguration(format!(
                "the analytic interferogram is derived for the sample in the MZ arm; \
                 placement `{}` must be evaluated with the mode-network oracle",
                setup.placement.as_str()
            )));
        }
        let grid = &setup.grid;
        let n = grid.len();
        let center = setup.spectrum.center_frequency();
        let f = grid.sample(&setup.spectrum)?;
        let detunings: Vec<f64> = grid.detunings().collect();

        let mut pair = Vec::with_capacity(n);
        let mut intensity = Vec::with_capacity(n);
        let mut alpha = Vec::with_capacity(n);
        let mut beta = Vec::with_capacity(n);
        let mut raw_baseline = 0.0;
        for k in 0..n {
            let w = detunings[k];
            let h = grid.weight(k);
            let plus = setup.sample.phase(center + w)?;
            let minus = setup.sample.phase(center - w)?;
            let a = 2.0 * (2.0 * w * setup.tau2 + (plus - minus)).cos();
            let b = 2.0 * (2.0 * center * setup.tau2 + (plus + minus)).cos();
            let i = h * f[k].norm_sqr();
            pair.push(f[k] * f[grid.mirror(k)].conj() * h);
            intensity.push(i);
            alpha.push(a);
            beta.push(b);
            raw_baseline += (PHI0 - a - b) * i;
        }
        raw_baseline *= PAIR_SCALE;
        if !raw_baseline.is_finite() {
            return Err(Error::numerical("baseline is not finite"));
        }
        let divisor = match setup.normalization {
            Normalization::Raw => 1.0,
            Normalization::BaselineOne => {
                if raw_baseline <= 0.0 {
                    return Err(Error::numerical(format!(
                        "cannot normalise by a non-positive baseline ({raw_baseline})"
                    )));
                }
                raw_baseline
            }
        };
        Ok(Self {
            detunings,
            pair,
            intensity,
            alpha,
            beta,
            step: grid.step(),
            count: n,
            raw_baseline,
            divisor,
        })
    }

    /// `B` in raw units.
    pub fn raw_baseline(&self) -> f64 {
        self.raw_baseline
    }

    /// `B` in output units.
    pub fn baseline(&self) -> f64 {
        self.raw_baseline / self.divisor
    }

    /// Divides raw rates to give output units.
    pub fn divisor(&self) -> f64 {
        self.divisor
    }

    /// `exp(-2 i w_k tau1)` on the grid: computed by recurrence on the
    /// positive half (re-anchored periodically) and conjugated onto the
    /// negative half.
    fn phasors(&self, tau1: f64, out: &mut Vec<Complex64>) {
        let n = self.count;
        out.clear();
        out.resize(n, Complex64::new(1.0, 0.0));
        let first = n / 2;
        let rotation = Complex64::from_polar(1.0, -2.0 * tau1 * self.step);
        let mut z = Complex64::new(1.0, 0.0);
        for k in first..n {
            z = if (k - first).is_multiple_of(ANCHOR_EVERY) {
                Complex64::from_polar(1.0, -2.0 * tau1 * self.detunings[k])
            } else {
                z * rotation
            };
            out[k] = z;
            out[n - 1 - k] = z.conj();
        }
        if n % 2 == 1 {
            out[n / 2] = Complex64::new(1.0, 0.0);
        }
    }

    pub fn evaluate(&self, tau1: f64) -> InterferogramSample {
        let mut buf = Vec::new();
        self.evaluate_with(tau1, &mut buf)
    }

    fn evaluate_with(&self, tau1: f64, buf: &mut Vec<Complex64>) -> InterferogramSample {
        self.phasors(tau1, buf);
        let mut r0 = Complex64::new(0.0, 0.0);
        let mut r_even = Complex64::new(0.0, 0.0);
        let mut r_odd = Complex64::new(0.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..self.count {
            let x = self.pair[k] * buf[k];
            let (a, b) = (self.alpha[k], self.beta[k]);
            r0 += x;
            r_even += x * b;
            r_odd += x * a;
            total += (x + self.intensity[k]) * (PHI0 - a - b);
        }
        let s = PAIR_SCALE / self.divisor;
        InterferogramSample {
            tau1,
            rc: total.re * s,
            b: self.raw_baseline / self.divisor,
            r0: PHI0 * r0.re * s,
            r_even: r_even.re * s,
            r_odd: r_odd.re * s,
            imag_residual: total.im * s,
        }
    }

    /// Evaluates many delays; output order follows `taus`.
    pub fn evaluate_many(&self, taus: &[f64]) -> Vec<InterferogramSample> {
        taus.par_iter()
            .map_init(Vec::new, |buf, &t| self.evaluate_with(t, buf))
            .collect()
    }
}

fn check_tau(tau1: f64) -> Result<()> {
    if tau1.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("tau1 must be finite, got {tau1}")))
    }
}

/// Coincidence rate `R_c(tau1)` [output units] for the MZ-arm placement.
pub fn coincidence_rate(setup: &SetupConfig, tau1: f64) -> Result<f64> {
    check_tau(tau1)?;
    Ok(AnalyticEngine::new(setup)?.evaluate(tau1).rc)
}

pub fn decompose(setup: &SetupConfig, tau1: f64) -> Result<Decomposition> {
    check_tau(tau1)?;
    Ok(AnalyticEngine::new(setup)?.evaluate(tau1).decomposition())
}

/// Evaluates the interferogram at the given delays (in order).
pub fn scan_points(setup: &SetupConfig, taus: &[f64]) -> Result<Interferogram> {
    if taus.is_empty() {
        return Err(Error::invalid("scan needs at least one delay"));
    }
    for &t in taus {
        check_tau(t)?;
    }
    let engine = AnalyticEngine::new(setup)?;
    Ok(Interferogram {
        samples: engine.evaluate_many(taus),
        baseline: engine.baseline(),
        raw_baseline: engine.raw_baseline(),
        warnings: setup.warnings(),
        setup: setup.clone(),
    })
}

/// `steps` delays uniformly spaced over `[tau1_min, tau1_max]`.
pub fn uniform_delays(tau1_min: f64, tau1_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::invalid(format!("scan needs at least 2 steps, got {steps}")));
    }
    if !(tau1_min.is_finite() && tau1_max.is_finite() && tau1_min < tau1_max) {
        return Err(Error::invalid(format!(
            "scan range must satisfy tau1_min < tau1_max, got [{tau1_min}, {tau1_max}]"
        )));
    }
    let d = (tau1_max - tau1_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { tau1_max } else { tau1_min + d * i as f64 })
        .collect())
}

pub fn scan(setup: &SetupConfig, tau1_min: f64, tau1_max: f64, steps: usize) -> Result<Interferogram> {
    scan_points(setup, &uniform_delays(tau1_min, tau1_max, steps)?)
}

/// Delay windows where the interferogram can differ from its baseline,
/// predicted from the group delay of the sample across the spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureWindows {
    pub central: (f64, f64),
    pub side_positive: (f64, f64),
    pub side_negative: (f64, f64),
}

/// Windows are stationary-phase delay ranges of the `R0`/`R_even` and
/// `R_odd` integrands over the part of the spectrum carrying non-negligible
/// power, padded by about ten coherence times.
pub fn feature_windows(setup: &SetupConfig) -> Result<FeatureWindows> {
    let grid = &setup.grid;
    let center = setup.spectrum.center_frequency();
    let f = grid.sample(&setup.spectrum)?;
    let peak = f.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
    let h = grid.step();
    let d = |w: f64| -> Result<f64> {
        Ok((setup.sample.phase(center + w + 0.5 * h)? - setup.sample.phase(center + w - 0.5 * h)?) / h)
    };
    let (mut even_lo, mut even_hi) = (0.0f64, 0.0f64);
    let (mut odd_lo, mut odd_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let stride = (grid.len() / 4096).max(1);
    for k in (0..grid.len()).step_by(stride) {
        let m = grid.mirror(k);
        if f[k].norm_sqr().min(f[m].norm_sqr()) < 1e-10 * peak {
            continue;
        }
        let w = grid.detuning(k);
        let (gp, gm) = (d(w)?, d(-w)?);
        // R_even stationary at tau1 = -(g(+w) - g(-w)) / 2; R_odd at tau1 = tau2 + (g(+w) + g(-w)) / 2.
        let e = -0.5 * (gp - gm);
        even_lo = even_lo.min(e);
        even_hi = even_hi.max(e);
        let o = 0.5 * (gp + gm);
        odd_lo = odd_lo.min(o);
        odd_hi = odd_hi.max(o);
    }
    if !odd_lo.is_finite() {
        return Err(Error::numerical("spectrum has no power on the grid"));
    }
    let pad = 12.0 / setup.spectrum.rms_bandwidth();
    let tau2 = setup.tau2;
    Ok(FeatureWindows {
        central: (even_lo - pad, even_hi + pad),
        side_positive: (tau2 + odd_lo - pad, tau2 + odd_hi + pad),
        side_negative: (-tau2 - odd_hi - pad, -tau2 - odd_lo + pad),
    })
}

/// Delay step that resolves the fastest structure the grid can represent
/// (eight samples per period `pi / half_width`).
pub fn dense_step(grid: &FrequencyGrid) -> f64 {
    PI / (8.0 * grid.half_width())
}

/// Coarse uniform sampling over `[tau1_min, tau1_max]` (`coarse_steps`
/// points) merged with dense sampling at [`dense_step`] inside each feature
/// window.
pub fn adaptive_delays(
    setup: &SetupConfig,
    tau1_min: f64,
    tau1_max: f64,
    coarse_steps: usize,
) -> Result<Vec<f64>> {
    let mut taus = uniform_delays(tau1_min, tau1_max, coarse_steps)?;
    let windows = feature_windows(setup)?;
    let step = dense_step(&setup.grid);
    for (lo, hi) in [windows.central, windows.side_positive, windows.side_negative] {
        let lo = lo.max(tau1_min);
        let hi = hi.min(tau1_max);
        if lo >= hi {
            continue;
        }
        // Anchor dense points on multiples of the step so windows line up.
        let first = (lo / step).ceil() as i64;
        let last = (hi / step).floor() as i64;
        taus.extend((first..=last).map(|i| i as f64 * step));
    }
    taus.sort_by(f64::total_cmp);
    taus.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * step);
    Ok(taus)
}

pub fn scan_adaptive(
    setup: &SetupConfig,
    tau1_min: f64,
    tau1_max: f64,
    coarse_steps: usize,
) -> Result<Interferogram> {
    scan_points(setup, &adaptive_delays(setup, tau1_min, tau1_max, coarse_steps)?)
}
