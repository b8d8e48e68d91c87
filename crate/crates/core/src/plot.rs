//! SVG scatter of charged zeros: `+` for positive charges, circles for
//! negative ones, equal-aspect axes. Output depends only on the input.

use std::fmt::Write as _;

use crate::simulate::Rect;
use crate::zeros::ChargedZero;

/// Longest side of the plotting area in pixels.
pub const PLOT_SIZE: f64 = 560.0;
const PAD: f64 = 48.0;
const MARK: f64 = 4.0;

/// Bounding box of the zeros, or the unit square when there are none.
pub fn bounds_of(zeros: &[ChargedZero]) -> Rect {
    if zeros.is_empty() {
        return Rect {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        };
    }
    let fold = |f: fn(&ChargedZero) -> f64| {
        zeros
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (x0, x1) = fold(|z| z.position.re);
    let (y0, y1) = fold(|z| z.position.im);
    let grow = |lo: f64, hi: f64| if hi - lo < 1e-9 { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
    let (x0, x1) = grow(x0, x1);
    let (y0, y1) = grow(y0, y1);
    Rect { x0, x1, y0, y1 }
}

fn tick_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Renders the zeros inside `view` (or their bounding box).
pub fn render_svg(zeros: &[ChargedZero], view: Option<Rect>, title: &str) -> String {
    let view = view.unwrap_or_else(|| bounds_of(zeros));
    let scale = PLOT_SIZE / view.width().max(view.height());
    let (w, h) = (view.width() * scale, view.height() * scale);
    let px = |x: f64| PAD + (x - view.x0) * scale;
    let py = |y: f64| PAD + (view.y1 - y) * scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.1}" height="{:.1}" viewBox="0 0 {:.1} {:.1}">"#,
        w + 2.0 * PAD,
        h + 2.0 * PAD,
        w + 2.0 * PAD,
        h + 2.0 * PAD
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let positive = zeros.iter().filter(|z| z.charge > 0).count();
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13">{} ({} zeros, {} positive, {} negative)</text>"#,
        PAD,
        PAD - 20.0,
        escape(title),
        zeros.len(),
        positive,
        zeros.len() - positive
    );
    let _ = writeln!(
        s,
        r#"<rect x="{PAD:.1}" y="{PAD:.1}" width="{w:.1}" height="{h:.1}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="10" fill="black">"#);
    for t in ticks(view.x0, view.x1) {
        let x = px(t);
        let y = PAD + h;
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, y + 4.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y + 16.0, label(t));
    }
    for t in ticks(view.y0, view.y1) {
        let y = py(t);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{PAD:.2}" y2="{y:.2}" stroke="black"/>"#, PAD - 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, PAD - 6.0, y + 3.5, label(t));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g stroke-width="1.2" fill="none">"#);
    for z in zeros.iter().filter(|z| view.contains(z.position)) {
        let (x, y) = (px(z.position.re), py(z.position.im));
        if z.charge > 0 {
            let _ = writeln!(
                s,
                r#"<path d="M{:.2} {y:.2}H{:.2}M{x:.2} {:.2}V{:.2}" stroke="black"/>"#,
                x - MARK,
                x + MARK,
                y - MARK,
                y + MARK
            );
        } else {
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{MARK:.1}" stroke="black"/>"#);
        }
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
