//! Locating and measuring interferogram features.

use super::Interferogram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    NoInterference,
    HomSideDip,
    CentralPeak,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::NoInterference => "no_interference",
            Regime::HomSideDip => "hom_side_dip",
            Regime::CentralPeak => "central_peak",
        }
    }
}

/// Which interference term is active at delay `tau1` for a dispersion-free
/// setup with MZ delay `tau2` and coherence time `tau_c` (all in ps).
/// Boundaries belong to the interfering regime.
pub fn classify_regime(tau1: f64, tau2: f64, coherence_time: f64) -> Regime {
    if tau1.abs() <= coherence_time {
        Regime::CentralPeak
    } else if (tau1 - tau2).abs().min((tau1 + tau2).abs()) <= coherence_time {
        Regime::HomSideDip
    } else {
        Regime::NoInterference
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Feature {
    pub regime: Regime,
    /// First moment of `R_c - B` over the feature [ps].
    pub center: f64,
    /// Distance between the outermost half-maximum crossings of `|R_c - B|` [ps].
    pub width: f64,
    /// Signed `R_c - B` at the largest excursion.
    pub extremum: f64,
    pub extremum_at: f64,
    /// Delay range the feature was measured over.
    pub window: (f64, f64),
}

/// Relative threshold (of the baseline) below which a deviation is noise.
const THRESHOLD: f64 = 2e-3;

/// Groups samples where `|R_c - B|` exceeds a small fraction of `B` into
/// features. Samples closer than `20 tau_c` join the same feature; a
/// feature whose window contains zero delay (or whose centre is within
/// `5 tau_c` of it) is the central one.
pub fn locate_features(ig: &Interferogram, coherence_time: f64) -> Vec<Feature> {
    locate_features_in(&ig.taus(), &ig.rc(), ig.baseline, coherence_time)
}

/// [`locate_features`] on a bare rate series with the given baseline.
pub fn locate_features_in(taus: &[f64], rates: &[f64], baseline: f64, coherence_time: f64) -> Vec<Feature> {
    assert_eq!(taus.len(), rates.len());
    let d: Vec<f64> = rates.iter().map(|r| r - baseline).collect();
    let threshold = THRESHOLD * baseline.abs();
    let merge_gap = 20.0 * coherence_time;
    let pad = 5.0 * coherence_time;

    let mut clusters: Vec<(usize, usize)> = Vec::new();
    for (i, v) in d.iter().enumerate() {
        if v.abs() <= threshold {
            continue;
        }
        match clusters.last_mut() {
            Some((_, last)) if taus[i] - taus[*last] <= merge_gap => *last = i,
            _ => clusters.push((i, i)),
        }
    }

    clusters
        .into_iter()
        .map(|(first, last)| {
            let lo = taus[first] - pad;
            let hi = taus[last] + pad;
            let idx: Vec<usize> = (0..taus.len()).filter(|&i| taus[i] >= lo && taus[i] <= hi).collect();
            let t: Vec<f64> = idx.iter().map(|&i| taus[i]).collect();
            let v: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
            let (k, _) = v
                .iter()
                .enumerate()
                .fold((0, 0.0), |(bk, bv), (k, x)| if x.abs() > bv { (k, x.abs()) } else { (bk, bv) });
            let center = centroid(&t, &v);
            let central = (lo <= 0.0 && hi >= 0.0) || center.abs() <= pad;
            Feature {
                regime: if central { Regime::CentralPeak } else { Regime::HomSideDip },
                center,
                width: fwhm(&t, &v).unwrap_or(0.0),
                extremum: v[k],
                extremum_at: t[k],
                window: (lo, hi),
            }
        })
        .collect()
}

/// Trapezoid-weighted first moment of `v`; falls back to `|v|` weights when
/// the signed area nearly cancels.
fn centroid(t: &[f64], v: &[f64]) -> f64 {
    let n = t.len();
    if n == 1 {
        return t[0];
    }
    let weight = |i: usize| {
        let left = if i > 0 { t[i] - t[i - 1] } else { 0.0 };
        let right = if i + 1 < n { t[i + 1] - t[i] } else { 0.0 };
        0.5 * (left + right)
    };
    let (mut m0, mut m1, mut a0, mut a1) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let w = weight(i);
        m0 += w * v[i];
        m1 += w * v[i] * t[i];
        a0 += w * v[i].abs();
        a1 += w * v[i].abs() * t[i];
    }
    if m0.abs() > 0.05 * a0 {
        m1 / m0
    } else {
        a1 / a0
    }
}

/// Width between the outermost points where `|values|` reaches half its
/// maximum, linearly interpolated. `None` if the maximum sits at an end of
/// the series or the series is flat zero.
pub fn fwhm(taus: &[f64], values: &[f64]) -> Option<f64> {
    assert_eq!(taus.len(), values.len());
    let mag: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let peak = mag.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return None;
    }
    let half = 0.5 * peak;
    let first = mag.iter().position(|&m| m >= half)?;
    let last = mag.iter().rposition(|&m| m >= half)?;
    if first == 0 || last + 1 == mag.len() {
        return None;
    }
    let cross = |a: usize, b: usize| {
        let f = (half - mag[a]) / (mag[b] - mag[a]);
        taus[a] + f * (taus[b] - taus[a])
    };
    Some(cross(last + 1, last) - cross(first - 1, first))
}

fn interpolate(taus: &[f64], values: &[f64], x: f64) -> Option<f64> {
    if taus.is_empty() || x < taus[0] || x > taus[taus.len() - 1] {
        return None;
    }
    let j = taus.partition_point(|&t| t < x);
    if j == 0 {
        return Some(values[0]);
    }
    let (t0, t1) = (taus[j - 1], taus[j]);
    let f = (x - t0) / (t1 - t0);
    Some(values[j - 1] + f * (values[j] - values[j - 1]))
}

/// Mirror asymmetry of `values` about `center` over `+-half_window`:
/// `sum |v(c+x) - v(c-x)| / sum (|v(c+x)| + |v(c-x)|)` on 400 offsets.
/// Zero for a symmetric profile, one for a fully one-sided one. `None` if
/// the window runs off the sampled range or the profile vanishes.
pub fn dip_asymmetry(taus: &[f64], values: &[f64], center: f64, half_window: f64) -> Option<f64> {
    const OFFSETS: usize = 400;
    let (mut num, mut den) = (0.0, 0.0);
    for j in 1..=OFFSETS {
        let x = half_window * j as f64 / OFFSETS as f64;
        let r = interpolate(taus, values, center + x)?;
        let l = interpolate(taus, values, center - x)?;
        num += (r - l).abs();
        den += r.abs() + l.abs();
    }
    if den > 0.0 {
        Some(num / den)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_boundaries() {
        let (t2, tc) = (10.0, 0.01);
        assert_eq!(classify_regime(0.0, t2, tc), Regime::CentralPeak);
        assert_eq!(classify_regime(tc, t2, tc), Regime::CentralPeak);
        assert_eq!(classify_regime(-tc, t2, tc), Regime::CentralPeak);
        assert_eq!(classify_regime(t2 + tc, t2, tc), Regime::HomSideDip);
        assert_eq!(classify_regime(-t2, t2, tc), Regime::HomSideDip);
        assert_eq!(classify_regime(5.0, t2, tc), Regime::NoInterference);
        assert_eq!(classify_regime(t2 + 1.01 * tc, t2, tc), Regime::NoInterference);
    }

    #[test]
    fn fwhm_of_gaussian() {
        let t: Vec<f64> = (0..2001).map(|i| -1.0 + i as f64 * 1e-3).collect();
        let s = 0.1;
        let v: Vec<f64> = t.iter().map(|x| -(-x * x / (2.0 * s * s)).exp()).collect();
        let w = fwhm(&t, &v).unwrap();
        let expected = 2.0 * (2.0 * 2f64.ln()).sqrt() * s;
        assert!((w - expected).abs() < 1e-5, "{w} vs {expected}");
        assert!(fwhm(&t[..1001], &v[..1001]).is_none());
    }

    #[test]
    fn asymmetry_limits() {
        let t: Vec<f64> = (0..2001).map(|i| -1.0 + i as f64 * 1e-3).collect();
        let sym: Vec<f64> = t.iter().map(|x| (-x * x * 50.0).exp()).collect();
        assert!(dip_asymmetry(&t, &sym, 0.0, 0.5).unwrap() < 1e-6);
        let one_sided: Vec<f64> = t.iter().map(|&x| if x > 0.0 { 1.0 } else { 0.0 }).collect();
        assert!((dip_asymmetry(&t, &one_sided, 0.0, 0.5).unwrap() - 1.0).abs() < 1e-12);
        assert!(dip_asymmetry(&t, &sym, 0.0, 2.0).is_none());
    }

    #[test]
    fn centroid_of_shifted_dip() {
        let t: Vec<f64> = (0..4001).map(|i| i as f64 * 1e-3).collect();
        let v: Vec<f64> = t.iter().map(|x| -(-(x - 2.345f64).powi(2) * 400.0).exp()).collect();
        assert!((centroid(&t, &v) - 2.345).abs() < 1e-9);
    }
}
