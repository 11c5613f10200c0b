//! Minimal static SVG line plots: fixed 800x800 canvas, frame, ticks.

use std::fmt::Write as _;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 70.0;

pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub equal_aspect: bool,
    pub series: Vec<Series>,
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn padded(lo: f64, hi: f64) -> Self {
        let span = hi - lo;
        let pad = if span > 0.0 { 0.05 * span } else { 0.5 * lo.abs().max(1.0) };
        Axis {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    fn span(&self) -> f64 {
        self.hi - self.lo
    }

    fn ticks(&self) -> Vec<f64> {
        let raw = self.span() / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{:.4}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl Plot {
    fn axes(&self) -> (Axis, Axis) {
        let pts = self.series.iter().flat_map(|s| s.points.iter());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
        }
        let (mut ax, mut ay) = (Axis::padded(x0, x1), Axis::padded(y0, y1));
        if self.equal_aspect {
            let half = ax.span().max(ay.span()) / 2.0;
            let (cx, cy) = ((ax.lo + ax.hi) / 2.0, (ay.lo + ay.hi) / 2.0);
            ax = Axis { lo: cx - half, hi: cx + half };
            ay = Axis { lo: cy - half, hi: cy + half };
        }
        (ax, ay)
    }

    pub fn render(&self) -> String {
        let (ax, ay) = self.axes();
        let inner = SIZE - 2.0 * MARGIN;
        let px = |x: f64| MARGIN + (x - ax.lo) / ax.span() * inner;
        let py = |y: f64| SIZE - MARGIN - (y - ay.lo) / ay.span() * inner;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800" font-family="sans-serif" font-size="13">"#
        );
        let _ = writeln!(s, r#"<rect width="800" height="800" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="400" y="35" text-anchor="middle" font-size="16">{}</text>"#, escape(&self.title));
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="black"/>"#
        );
        for t in ax.ticks() {
            let x = px(t);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{b2}" stroke="black"/><text x="{x:.2}" y="{ty}" text-anchor="middle">{}</text>"#,
                fmt_tick(t),
                b = SIZE - MARGIN,
                b2 = SIZE - MARGIN + 6.0,
                ty = SIZE - MARGIN + 22.0,
            );
        }
        for t in ay.ticks() {
            let y = py(t);
            let _ = writeln!(
                s,
                r#"<line x1="{l2}" y1="{y:.2}" x2="{MARGIN}" y2="{y:.2}" stroke="black"/><text x="{tx}" y="{y:.2}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
                fmt_tick(t),
                l2 = MARGIN - 6.0,
                tx = MARGIN - 9.0,
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="400" y="{}" text-anchor="middle">{}</text>"#,
            SIZE - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="400" text-anchor="middle" transform="rotate(-90 20 400)">{}</text>"#,
            escape(&self.y_label)
        );
        for (i, series) in self.series.iter().enumerate() {
            let coords: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y)))
                .collect();
            let tag = if series.closed { "polygon" } else { "polyline" };
            let _ = writeln!(
                s,
                r#"<{tag} points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                coords.join(" "),
                series.color
            );
            let ly = MARGIN + 20.0 + 18.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{ly}" dominant-baseline="middle">{}</text>"#,
                MARGIN + 12.0,
                MARGIN + 36.0,
                series.color,
                MARGIN + 42.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
