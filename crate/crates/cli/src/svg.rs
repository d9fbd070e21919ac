//! Minimal SVG line plots: axes, tick labels, polylines and error-bar points.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 4] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Markers {
    pub label: String,
    /// `(x, y, sigma)`
    pub points: Vec<(f64, f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub lines: Vec<Series>,
    pub markers: Vec<Markers>,
    /// Horizontal reference line (e.g. the classical bound S = 2).
    pub reference_y: Option<f64>,
}

fn bounds(plot: &Plot) -> (f64, f64, f64, f64) {
    let xs = plot
        .lines
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .chain(plot.markers.iter().flat_map(|m| m.points.iter().map(|p| p.0)));
    let ys = plot
        .lines
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .chain(plot.markers.iter().flat_map(|m| m.points.iter().flat_map(|p| [p.1 - p.2, p.1 + p.2])))
        .chain(plot.reference_y);
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let pad = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let dy = 0.05 * (y1 - y0);
    (x0, x1, y0 - dy, y1 + dy)
}

pub fn render(plot: &Plot) -> String {
    let (x0, x1, y0, y1) = bounds(plot);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ =
        writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, plot.title);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" stroke="black" fill="none"/>"#);
    for i in 0..=5 {
        let f = f64::from(i) / 5.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ =
            writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, px(xv), bottom + 16.0, tick(xv));
        let _ =
            writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, left - 6.0, py(yv) + 4.0, tick(yv));
    }
    let _ =
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 14.0, plot.x_label);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        plot.y_label
    );
    if let Some(r) = plot.reference_y {
        let _ = writeln!(
            s,
            r##"<line x1="{left}" x2="{right}" y1="{0:.1}" y2="{0:.1}" stroke="#888" stroke-dasharray="4 3"/>"##,
            py(r)
        );
    }
    for (i, line) in plot.lines.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = line.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ =
            writeln!(s, r#"<polyline points="{}" stroke="{color}" stroke-width="1.5" fill="none"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            right - 150.0,
            top + 14.0 * (i as f64 + 1.0),
            line.label
        );
    }
    for (i, m) in plot.markers.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        for &(x, y, sigma) in &m.points {
            let _ = writeln!(
                s,
                r#"<line x1="{0:.2}" x2="{0:.2}" y1="{1:.2}" y2="{2:.2}" stroke="{color}"/><circle cx="{0:.2}" cy="{3:.2}" r="3.5" fill="{color}"/>"#,
                px(x),
                py(y - sigma),
                py(y + sigma),
                py(y)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            right - 150.0,
            top + 14.0 * (plot.lines.len() + i + 1) as f64,
            m.label
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
