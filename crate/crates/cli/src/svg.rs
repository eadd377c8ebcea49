//! Minimal SVG 1.1 line charts.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
/// Long series are reduced to per-bucket min/max pairs.
const MAX_BUCKETS: usize = 1500;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        return None;
    }
    if hi - lo <= 1e-12 * hi.abs().max(lo.abs()).max(1e-300) {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

/// Indices kept when plotting: every point for short series, otherwise the
/// first, the minimum and the maximum of each bucket, in order.
fn decimate(ys: &[f64]) -> Vec<usize> {
    if ys.len() <= 2 * MAX_BUCKETS {
        return (0..ys.len()).collect();
    }
    let size = ys.len().div_ceil(MAX_BUCKETS);
    let mut keep = Vec::with_capacity(3 * MAX_BUCKETS + 1);
    for start in (0..ys.len()).step_by(size) {
        let end = (start + size).min(ys.len());
        let bucket = start..end;
        let lo = bucket.clone().min_by(|&a, &b| ys[a].total_cmp(&ys[b])).unwrap_or(start);
        let hi = bucket.clone().max_by(|&a, &b| ys[a].total_cmp(&ys[b])).unwrap_or(start);
        let mut idx = [start, lo, hi];
        idx.sort_unstable();
        for i in idx {
            if keep.last() != Some(&i) {
                keep.push(i);
            }
        }
    }
    if keep.last() != Some(&(ys.len() - 1)) {
        keep.push(ys.len() - 1);
    }
    keep
}

fn tick_label(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        format!("{}", (v * 1e4).round() / 1e4)
    } else {
        format!("{v:.2e}")
    }
}

/// Renders `ys` against `xs` as a standalone SVG document.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64]) -> String {
    let n = xs.len().min(ys.len());
    let (x0, x1) = range(xs[..n].iter().copied()).unwrap_or((0.0, 1.0));
    let (y0, y1) = range(ys[..n].iter().copied()).unwrap_or((0.0, 1.0));
    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#ddd"/><text x="{px:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"##,
            MARGIN_T,
            MARGIN_T + ph,
            MARGIN_T + ph + 16.0,
            tick_label(xv)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_L}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"##,
            MARGIN_L + pw,
            MARGIN_L - 6.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        MARGIN_L + pw / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0,
        escape(y_label)
    );

    let mut path = String::new();
    let mut pen_down = false;
    for i in decimate(&ys[..n]) {
        let (x, y) = (xs[i], ys[i]);
        if !(x.is_finite() && y.is_finite()) {
            pen_down = false;
            continue;
        }
        let _ = write!(path, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, sx(x), sy(y));
        pen_down = true;
    }
    let _ = writeln!(
        s,
        r##"<path d="{}" fill="none" stroke="#1f4e9c" stroke-width="1.2"/>"##,
        path.trim_end()
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_valid_looking_document() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let svg = line_plot("a < b", "t", "y", &xs, &ys);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"version="1.1""#));
        assert!(svg.contains("a &lt; b"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches('M').count() - svg.matches("M ").count(), 1);
    }

    #[test]
    fn constant_and_non_finite_series() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let svg = line_plot("c", "t", "y", &xs, &[1.0, 1.0, f64::NAN, 1.0]);
        assert!(!svg.contains("NaN"));
        assert!(!svg.contains("inf"));
    }

    #[test]
    fn long_series_are_decimated_keeping_extremes() {
        let ys: Vec<f64> = (0..100_000).map(|i| if i == 54_321 { 10.0 } else { 0.0 }).collect();
        let keep = decimate(&ys);
        assert!(keep.len() <= 3 * MAX_BUCKETS + 1);
        assert!(keep.contains(&54_321));
        assert!(keep.windows(2).all(|w| w[0] < w[1]));
    }
}
