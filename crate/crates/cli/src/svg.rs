//! Minimal SVG 1.1 plots.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit<'a>(xs: impl Iterator<Item = &'a f64>, ys: impl Iterator<Item = &'a f64>) -> Frame {
        let (x0, x1) = bounds(xs);
        let (y0, y1) = bounds(ys);
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD)
    }
}

fn bounds<'a>(it: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = it
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.02 * (hi - lo);
    (lo - pad, hi + pad)
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str, frame: &Frame) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        W / 2.0,
        PAD / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 8.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    for (x, anchor, v) in [(PAD, "start", frame.x0), (W - PAD, "end", frame.x1)] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{}</text>"#,
            H - PAD + 14.0,
            tick(v)
        );
    }
    for (y, v) in [(H - PAD, frame.y0), (PAD + 10.0, frame.y1)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{y}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
            PAD - 4.0,
            tick(v)
        );
    }
}

fn legend(out: &mut String, labels: &[&str]) {
    for (i, label) in labels.iter().enumerate() {
        let y = PAD + 16.0 + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{y}" font-family="sans-serif" font-size="11" fill="{}">{}</text>"#,
            PAD + 8.0,
            COLORS[i % COLORS.len()],
            escape(label)
        );
    }
}

fn tick(v: f64) -> String {
    format!("{v:.3}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Evenly spaced subset of at most `max` indices.
fn decimated(len: usize, max: usize) -> impl Iterator<Item = usize> {
    let n = len.min(max);
    (0..n).map(move |i| if n == len { i } else { i * len / n })
}

/// Polylines, decimated to `max_points` vertices each.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>], max_points: usize) -> String {
    let frame = Frame::fit(
        series.iter().flat_map(|s| s.x.iter()),
        series.iter().flat_map(|s| s.y.iter()),
    );
    let mut out = String::new();
    header(&mut out, title, x_label, y_label, &frame);
    for (i, s) in series.iter().enumerate() {
        let mut pts = String::new();
        for k in decimated(s.x.len(), max_points).chain(s.x.len().checked_sub(1)) {
            let _ = write!(pts, "{:.2},{:.2} ", frame.px(s.x[k]), frame.py(s.y[k]));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
            COLORS[i % COLORS.len()],
            pts.trim_end()
        );
    }
    legend(&mut out, &series.iter().map(|s| s.label).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}

/// Dots, decimated to `max_points` per series.
pub fn scatter(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>], max_points: usize) -> String {
    let frame = Frame::fit(
        series.iter().flat_map(|s| s.x.iter()),
        series.iter().flat_map(|s| s.y.iter()),
    );
    let mut out = String::new();
    header(&mut out, title, x_label, y_label, &frame);
    for (i, s) in series.iter().enumerate() {
        let _ = writeln!(out, r#"<g fill="{}" fill-opacity="0.5">"#, COLORS[i % COLORS.len()]);
        for k in decimated(s.x.len(), max_points) {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="0.8"/>"#,
                frame.px(s.x[k]),
                frame.py(s.y[k])
            );
        }
        out.push_str("</g>\n");
    }
    legend(&mut out, &series.iter().map(|s| s.label).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}

/// Markers and a fitted line `y = slope x + intercept` in log-log space.
pub fn loglog(title: &str, x_label: &str, y_label: &str, series: &[(Series<'_>, f64, f64)]) -> String {
    let logged: Vec<(Vec<f64>, Vec<f64>)> = series
        .iter()
        .map(|(s, _, _)| (s.x.iter().map(|v| v.ln()).collect(), s.y.iter().map(|v| v.ln()).collect()))
        .collect();
    let frame = Frame::fit(
        logged.iter().flat_map(|l| l.0.iter()),
        logged.iter().flat_map(|l| l.1.iter()),
    );
    let mut out = String::new();
    header(&mut out, title, x_label, y_label, &frame);
    for (i, ((_, slope, intercept), (lx, ly))) in series.iter().zip(&logged).enumerate() {
        let color = COLORS[i % COLORS.len()];
        for (&x, &y) in lx.iter().zip(ly) {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                frame.px(x),
                frame.py(y)
            );
        }
        let (a, b) = bounds(lx.iter());
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="4 3"/>"#,
            frame.px(a),
            frame.py(slope * a + intercept),
            frame.px(b),
            frame.py(slope * b + intercept)
        );
    }
    let labels: Vec<String> = series
        .iter()
        .map(|(s, slope, _)| format!("{} (slope {slope:.4})", s.label))
        .collect();
    legend(&mut out, &labels.iter().map(String::as_str).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}
