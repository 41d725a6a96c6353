//! Minimal SVG line plots for the command outputs.

use std::fmt::Write as _;

use crate::mismatch::SmithCell;

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 56.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn finite_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl LinePlot {
    pub fn render(&self) -> String {
        let (x0, x1) = finite_range(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.0)),
        );
        let (y0, y1) = finite_range(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.1)),
        );
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

        let mut out = String::new();
        header(&mut out, &self.title);
        let _ = writeln!(
            out,
            r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let xv = x0 + t * (x1 - x0);
            let yv = y0 + t * (y1 - y0);
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                sx(xv),
                H - PAD + 16.0,
                tick(xv)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                PAD - 4.0,
                sy(yv) + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            W / 2.0,
            H - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
            H / 2.0,
            H / 2.0,
            escape(&self.y_label)
        );
        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
                W - PAD - 110.0,
                PAD + 16.0 + 14.0 * k as f64,
                escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

/// Reflection-coefficient disk with constant-power circles and the
/// boundaries where voltage or current reach their matched amplitudes.
pub fn smith_chart(alpha: f64, cells: &[SmithCell], angular: usize) -> String {
    let r = (H - 2.0 * PAD) / 2.0;
    let (cx, cy) = (W / 2.0, H / 2.0 + 8.0);
    let px = |g: num_complex::Complex64| (cx + r * g.re, cy - r * g.im);

    let mut out = String::new();
    header(&mut out, &format!("Smith chart, alpha = {alpha}"));
    let _ = writeln!(
        out,
        r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{cy}" x2="{}" y2="{cy}" stroke="#999"/>"##,
        cx - r,
        cx + r
    );
    for p in [0.25f64, 0.5, 0.75, 0.9] {
        let rho = (1.0 - p).sqrt();
        let _ = writeln!(
            out,
            r##"<circle cx="{cx}" cy="{cy}" r="{:.2}" fill="none" stroke="#bbb" stroke-dasharray="4 3"/>"##,
            r * rho
        );
    }
    for (flag, color, label) in [
        (0usize, "#1f77b4", "|V| = matched"),
        (1usize, "#d62728", "|I| = matched"),
    ] {
        // First ring on each spoke where the flag differs from the centre.
        let rings = cells.len() / angular.max(1);
        let get = |c: &SmithCell| {
            if flag == 0 {
                c.v_exceeds_one
            } else {
                c.i_exceeds_one
            }
        };
        for a in 0..angular {
            for k in 1..rings {
                let prev = &cells[(k - 1) * angular + a];
                let cur = &cells[k * angular + a];
                if get(prev) != get(cur) {
                    let (x, y) = px(cur.gamma);
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.2" fill="{color}"/>"#
                    );
                }
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="12" y="{}" fill="{color}">{label}</text>"#,
            40.0 + 14.0 * flag as f64
        );
    }
    out.push_str("</svg>\n");
    out
}
