//! The `run` subcommand: plan, compute, write outputs, summarise.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use disperscan::dispersion::{fit_taylor, DEFAULT_TAYLOR_ORDER};
use disperscan::interferogram::{feature_windows, locate_features_in, scan_points};
use disperscan::oracle::oracle_scan;
use disperscan::{Interferogram, Normalization, Placement};

use crate::config::{self, Overrides, Plan};
use crate::csv_out::emit_csv;
use crate::error::CliError;
use crate::plot::{emit_plot, Curve, Inset};

pub const CSV_NAME: &str = "interferogram.csv";
pub const SVG_NAME: &str = "interferogram.svg";

/// Everything a run produced, for callers that want more than the files.
#[derive(Debug)]
pub struct RunOutput {
    pub plan: Plan,
    pub analytic: Option<Interferogram>,
    pub oracle: Option<Vec<f64>>,
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
    pub summary: String,
}

pub fn run(config_path: &Path, overrides: &Overrides) -> Result<RunOutput, CliError> {
    let plan = config::plan(config_path, overrides)?;
    for w in &plan.warnings {
        eprintln!("warning: {w}");
    }
    execute(plan)
}

pub fn execute(plan: Plan) -> Result<RunOutput, CliError> {
    let setup = &plan.setup;
    let analytic = if plan.engine.analytic() {
        Some(scan_points(setup, &plan.taus)?)
    } else {
        None
    };
    let oracle = if plan.engine.oracle() {
        Some(oracle_scan(setup, &plan.taus)?)
    } else {
        None
    };

    let csv_path = plan.output_dir.join(CSV_NAME);
    emit_csv(&csv_path, &plan.taus, analytic.as_ref(), oracle.as_ref().map(|o| o.rates.as_slice()))?;

    // Rates and baseline in output units, preferring the analytic engine.
    let (rates, baseline) = match (&analytic, &oracle) {
        (Some(ig), _) => (ig.rc(), ig.baseline),
        (None, Some(o)) => (
            o.rates.clone(),
            match setup.normalization {
                Normalization::Raw => o.raw_baseline,
                Normalization::BaselineOne => 1.0,
            },
        ),
        (None, None) => unreachable!("an engine is always selected"),
    };

    let inset = inset_window(&plan, &rates);
    let svg_path = if plan.plot {
        let path = plan.output_dir.join(SVG_NAME);
        let mut curves = Vec::new();
        if let Some(ig) = &analytic {
            curves.push(("analytic", ig.rc()));
        }
        if let Some(o) = &oracle {
            curves.push(("oracle", o.rates.clone()));
        }
        let curves: Vec<Curve> = curves
            .iter()
            .map(|(label, values)| Curve {
                label,
                values: values.as_slice(),
            })
            .collect();
        let y_label = match setup.normalization {
            Normalization::BaselineOne => "Rc / B",
            Normalization::Raw => "Rc",
        };
        emit_plot(&path, &plan.taus, &curves, inset, y_label)?;
        Some(path)
    } else {
        None
    };

    let summary = summarize(&plan, &rates, baseline, analytic.as_ref(), oracle.as_ref().map(|o| o.rates.as_slice()), &csv_path, svg_path.as_deref())?;
    Ok(RunOutput {
        plan,
        analytic,
        oracle: oracle.map(|o| o.rates),
        csv_path,
        svg_path,
        summary,
    })
}

/// Inset on the positive-delay side dip: the window predicted from the
/// sample's group delay, clipped to the scan. Falls back to `+-tau2` or the
/// strongest excursion when that window is outside the scan.
fn inset_window(plan: &Plan, rates: &[f64]) -> Option<Inset> {
    let taus = &plan.taus;
    let (lo, hi) = (taus[0], taus[taus.len() - 1]);
    let in_scan = |c: f64| c > lo && c < hi;
    let predicted = if plan.setup.placement == Placement::MzArm {
        feature_windows(&plan.setup).ok().map(|w| w.side_positive)
    } else {
        None
    };
    let tc = plan.setup.spectrum.coherence_time().unwrap_or(0.0);
    let fallback_half = (20.0 * tc).max(4.0 * (hi - lo) / taus.len() as f64);
    let (center, half) = match predicted {
        Some((a, b)) if in_scan(0.5 * (a + b)) => (0.5 * (a + b), 0.5 * (b - a)),
        _ if in_scan(plan.setup.tau2) => (plan.setup.tau2, fallback_half),
        _ if in_scan(-plan.setup.tau2) => (-plan.setup.tau2, fallback_half),
        _ => {
            let k = rates
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bk, bv), (k, r)| {
                    let d = (r - rates[0]).abs();
                    if d > bv { (k, d) } else { (bk, bv) }
                })
                .0;
            (taus[k], fallback_half)
        }
    };
    let half = half.min(center - lo).min(hi - center);
    (half > 0.0).then_some(Inset {
        center,
        half_width: half,
    })
}

fn summarize(
    plan: &Plan,
    rates: &[f64],
    baseline: f64,
    analytic: Option<&Interferogram>,
    oracle: Option<&[f64]>,
    csv_path: &Path,
    svg_path: Option<&Path>,
) -> Result<String, CliError> {
    let setup = &plan.setup;
    let grid = &setup.grid;
    let w0 = setup.spectrum.center_frequency();
    let tc = setup.spectrum.coherence_time()?;
    let mut s = String::new();
    let _ = writeln!(s, "materials: {}", plan.materials_origin);
    let _ = writeln!(s, "sample: {}", setup.sample.describe());
    let _ = writeln!(
        s,
        "placement: {}  tau2: {} ps  normalization: {}",
        setup.placement.as_str(),
        setup.tau2,
        setup.normalization.as_str()
    );
    let _ = writeln!(
        s,
        "grid: {} points, half-width {:.6} rad/ps, alias period {:.3} ps",
        grid.len(),
        grid.half_width(),
        grid.alias_period()
    );
    let _ = writeln!(s, "coherence time: {:.6} ps", tc);
    let fit = fit_taylor(setup.sample.as_ref(), w0, DEFAULT_TAYLOR_ORDER, 0.0)?;
    let c1 = fit.phase.coefficient(1);
    let _ = writeln!(
        s,
        "sample group delay c1: {c1:.6} ps; side dips expected near +-{:.6} ps",
        (setup.tau2 + c1).abs()
    );
    let _ = writeln!(s, "baseline: {baseline:.11e}");
    let _ = writeln!(s, "samples: {}", plan.taus.len());

    let features = locate_features_in(&plan.taus, rates, baseline, tc);
    let _ = writeln!(s, "features: {}", features.len());
    let _ = writeln!(
        s,
        "  {:<14} {:>14} {:>14} {:>16} {:>14}",
        "regime", "center_ps", "width_ps", "depth", "extremum_at_ps"
    );
    for f in &features {
        let _ = writeln!(
            s,
            "  {:<14} {:>14.6} {:>14.6} {:>16.6e} {:>14.6}",
            f.regime.as_str(),
            f.center,
            f.width,
            f.extremum,
            f.extremum_at
        );
    }

    if let (Some(ig), Some(o)) = (analytic, oracle) {
        let scale = ig.max_abs_rc().max(o.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        let worst = ig
            .samples
            .iter()
            .zip(o)
            .map(|(a, b)| (a.rc - b).abs())
            .fold(0.0f64, f64::max);
        let _ = writeln!(s, "max relative analytic/oracle discrepancy: {:.3e}", worst / scale);
    }
    let _ = writeln!(s, "csv: {}", csv_path.display());
    if let Some(p) = svg_path {
        let _ = writeln!(s, "svg: {}", p.display());
    }
    Ok(s)
}

/// `materials list` output: one block per material.
pub fn list_materials(path: Option<&Path>) -> Result<String, CliError> {
    let db = config::load_materials(path)?;
    let mut s = String::new();
    let _ = writeln!(s, "materials file: {}", db.origin());
    for m in db.iter() {
        let _ = writeln!(
            s,
            "{}\t{}\t{:.3}-{:.3} um\t{}",
            m.id, m.name, m.model.min_um, m.model.max_um, m.source
        );
    }
    Ok(s)
}
