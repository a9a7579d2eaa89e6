//! Static SVG rendering of an interferogram: the full scan plus an inset
//! zoomed on one side-dip window.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::CliError;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;
const COLORS: [&str; 3] = ["#1f4e9c", "#c4452b", "#2a8a3e"];

pub struct Curve<'a> {
    pub label: &'a str,
    pub values: &'a [f64],
}

/// Delay window shown in the inset [ps].
#[derive(Clone, Copy, Debug)]
pub struct Inset {
    pub center: f64,
    pub half_width: f64,
}

#[derive(Clone, Copy)]
struct Frame {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    t: (f64, f64),
    v: (f64, f64),
}

impl Frame {
    fn px(&self, t: f64) -> f64 {
        self.x + (t - self.t.0) / (self.t.1 - self.t.0) * self.w
    }

    fn py(&self, v: f64) -> f64 {
        self.y + self.h - (v - self.v.0) / (self.v.1 - self.v.0) * self.h
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let span = (hi - lo).max(1e-12 * hi.abs().max(1.0));
    (lo - 0.05 * span, hi + 0.05 * span)
}

/// Up to `count` round tick values covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let raw = (hi - lo) / count as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw * (1.0 - 1e-9))
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn polyline(out: &mut String, frame: &Frame, taus: &[f64], values: &[f64], color: &str, id: &str) {
    let mut points = String::new();
    for (&t, &v) in taus.iter().zip(values) {
        if t < frame.t.0 || t > frame.t.1 {
            continue;
        }
        let _ = write!(points, "{:.2},{:.2} ", frame.px(t), frame.py(v));
    }
    let _ = writeln!(
        out,
        r#"<polyline id="{id}" fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#,
        points.trim_end()
    );
}

fn axes(out: &mut String, frame: &Frame, font: f64) {
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="white" stroke="black"/>"#,
        frame.x, frame.y, frame.w, frame.h
    );
    for t in ticks(frame.t.0, frame.t.1, 8) {
        let x = frame.px(t);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-size="{font}" text-anchor="middle">{}</text>"#,
            frame.y + frame.h,
            frame.y + frame.h - 4.0,
            frame.y + frame.h + font + 2.0,
            label(t)
        );
    }
    for v in ticks(frame.v.0, frame.v.1, 6) {
        let y = frame.py(v);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="{font}" text-anchor="end">{}</text>"#,
            frame.x,
            frame.x + 4.0,
            frame.x - 3.0,
            y + font / 3.0,
            label(v)
        );
    }
}

/// Writes the plot. `curves` share the delay axis `taus`.
pub fn emit_plot(
    path: &Path,
    taus: &[f64],
    curves: &[Curve],
    inset: Option<Inset>,
    y_label: &str,
) -> Result<(), CliError> {
    assert!(!taus.is_empty() && !curves.is_empty());
    let main = Frame {
        x: MARGIN_LEFT,
        y: MARGIN_TOP,
        w: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        h: HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
        t: (taus[0], taus[taus.len() - 1]),
        v: padded_range(curves.iter().flat_map(|c| c.values.iter().copied())),
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<g id="main">"#);
    axes(&mut out, &main, 12.0);
    for (i, c) in curves.iter().enumerate() {
        polyline(&mut out, &main, taus, c.values, COLORS[i % COLORS.len()], &format!("main-{}", c.label));
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">tau1 (ps)</text>"#,
        main.x + main.w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">{y_label}</text>"#,
        main.y + main.h / 2.0,
        main.y + main.h / 2.0
    );
    for (i, c) in curves.iter().enumerate() {
        let y = main.y + 16.0 + 16.0 * i as f64;
        let x = main.x + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
            x + 20.0,
            COLORS[i % COLORS.len()],
            x + 26.0,
            y + 4.0,
            c.label
        );
    }
    let _ = writeln!(out, "</g>");

    if let Some(inset) = inset {
        let lo = inset.center - inset.half_width;
        let hi = inset.center + inset.half_width;
        let inside = |t: f64| t >= lo && t <= hi;
        let frame = Frame {
            x: main.x + main.w * 0.62,
            y: main.y + main.h * 0.06,
            w: main.w * 0.35,
            h: main.h * 0.38,
            t: (lo, hi),
            v: padded_range(curves.iter().flat_map(|c| {
                taus.iter().zip(c.values).filter(|(t, _)| inside(**t)).map(|(_, v)| *v)
            })),
        };
        let _ = writeln!(
            out,
            r#"<g id="inset" data-center-ps="{:.6}" data-half-width-ps="{:.6}">"#,
            inset.center, inset.half_width
        );
        axes(&mut out, &frame, 9.0);
        for (i, c) in curves.iter().enumerate() {
            polyline(&mut out, &frame, taus, c.values, COLORS[i % COLORS.len()], &format!("inset-{}", c.label));
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}
