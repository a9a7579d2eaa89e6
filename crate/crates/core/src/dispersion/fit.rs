//! Taylor coefficients of an arbitrary phase by central finite differences
//! with Richardson extrapolation.

use crate::error::{Error, Result};

use super::{PhaseFunction, TaylorPhase};

pub const MAX_FIT_ORDER: usize = 5;

/// Finite-difference step as a fraction of the expansion frequency.
pub const FIT_STEP_FRACTION: f64 = 1e-4;

const RESIDUAL_POINTS: usize = 201;

#[derive(Clone, Debug)]
pub struct TaylorFit {
    pub phase: TaylorPhase,
    /// max |phi - taylor| [rad] over `center +- window_half_width`.
    pub max_residual: f64,
    pub window_half_width: f64,
}

/// Estimates `c_k = phi^(k)(w0) / k!` for `k = 0..=order`.
///
/// Each derivative uses the narrowest second-order central stencil, evaluated
/// at steps `h` and `2h` and combined as `(4 D_h - D_2h) / 3`.
pub fn fit_taylor(
    phase: &dyn PhaseFunction,
    center_frequency: f64,
    order: usize,
    window_half_width: f64,
) -> Result<TaylorFit> {
    if order > MAX_FIT_ORDER {
        return Err(Error::OutOfRange {
            what: "Taylor fit order",
            value: order as f64,
            min: 0.0,
            max: MAX_FIT_ORDER as f64,
        });
    }
    if !(center_frequency.is_finite() && center_frequency > 0.0) {
        return Err(Error::invalid(format!(
            "expansion frequency must be positive, got {center_frequency}"
        )));
    }
    if !(window_half_width.is_finite() && window_half_width >= 0.0) {
        return Err(Error::invalid("residual window must be finite and non-negative"));
    }

    let h = FIT_STEP_FRACTION * center_frequency;
    // Stencil half-width for the highest derivative, doubled for the coarse level.
    let reach = order.div_ceil(2);
    let samples_at = |step: f64| -> Result<Vec<f64>> {
        (-(reach as i64)..=reach as i64)
            .map(|j| phase.phase(center_frequency + j as f64 * step))
            .collect()
    };
    let fine = samples_at(h)?;
    let coarse = samples_at(2.0 * h)?;

    let mut coefficients = Vec::with_capacity(order + 1);
    coefficients.push(fine[reach]);
    let mut factorial = 1.0;
    for k in 1..=order {
        factorial *= k as f64;
        let half = k.div_ceil(2);
        let weights = central_weights(k, half);
        let apply = |values: &[f64], step: f64| -> f64 {
            let offset = reach - half;
            weights
                .iter()
                .zip(&values[offset..offset + weights.len()])
                .map(|(w, v)| w * v)
                .sum::<f64>()
                / step.powi(k as i32)
        };
        let d_fine = apply(&fine, h);
        let d_coarse = apply(&coarse, 2.0 * h);
        let derivative = (4.0 * d_fine - d_coarse) / 3.0;
        if !derivative.is_finite() {
            return Err(Error::numerical(format!(
                "derivative of order {k} is not finite at {center_frequency} rad/ps"
            )));
        }
        coefficients.push(derivative / factorial);
    }

    let taylor = TaylorPhase::new(center_frequency, coefficients)?;
    let mut max_residual: f64 = 0.0;
    for i in 0..RESIDUAL_POINTS {
        let w = center_frequency - window_half_width
            + 2.0 * window_half_width * i as f64 / (RESIDUAL_POINTS - 1) as f64;
        let r = (phase.phase(w)? - taylor.taylor_phase(w)).abs();
        if !r.is_finite() {
            return Err(Error::numerical("Taylor residual is not finite"));
        }
        max_residual = max_residual.max(r);
    }
    Ok(TaylorFit {
        phase: taylor,
        max_residual,
        window_half_width,
    })
}

/// Weights of the `m`-th derivative on nodes `-half..=half` (unit spacing),
/// via Fornberg's recursion.
fn central_weights(m: usize, half: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (-(half as i64)..=half as i64).map(|j| j as f64).collect();
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c.swap_remove(m)
}
