use std::fmt::Write as _;
use std::path::Path;

use ndarray::ArrayView2;

use super::EvalError;

const PALETTE: [&str; 20] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
];

const PLOT: f64 = 600.0;
const MARGIN: f64 = 20.0;
const LEGEND_WIDTH: f64 = 260.0;
const RADIUS: f64 = 3.0;

/// Colour of class `index`. The first twenty come from a fixed table,
/// later ones walk the hue circle by the golden angle.
pub fn palette_color(index: usize) -> String {
    match PALETTE.get(index) {
        Some(c) => (*c).to_string(),
        None => {
            let hue = (index as f64 * 137.507_764) % 360.0;
            format!("hsl({hue:.1},65%,45%)")
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG scatter plot of 2-D `points`, one marker per point coloured by
/// `labels[i]` (an index into `classes`), with a legend of every class.
pub fn render_scatter(points: ArrayView2<f64>, labels: &[usize], classes: &[String]) -> Result<String, EvalError> {
    if points.ncols() != 2 && points.nrows() > 0 {
        return Err(EvalError::Config(format!("scatter needs 2 columns, got {}", points.ncols())));
    }
    if labels.len() != points.nrows() {
        return Err(EvalError::Config(format!("{} points with {} labels", points.nrows(), labels.len())));
    }
    if let Some(&y) = labels.iter().find(|&&y| y >= classes.len()) {
        return Err(EvalError::Config(format!("label {y} has no class name")));
    }
    let legend_height = MARGIN * 2.0 + 18.0 * classes.len() as f64;
    let width = PLOT + 2.0 * MARGIN + LEGEND_WIDTH;
    let height = (PLOT + 2.0 * MARGIN).max(legend_height);

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points.rows() {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let (sx, sy) = (span(x0, x1), span(y0, y1));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{PLOT}" fill="none" stroke="#444"/>"##
    );
    let _ = writeln!(svg, r#"<g id="points">"#);
    for (p, &y) in points.rows().into_iter().zip(labels) {
        let cx = MARGIN + (p[0] - x0) / sx * PLOT;
        let cy = MARGIN + PLOT - (p[1] - y0) / sy * PLOT;
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{RADIUS}" fill="{}" fill-opacity="0.8"/>"#,
            palette_color(y)
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r#"<g id="legend" font-family="sans-serif" font-size="12">"#);
    let lx = PLOT + 2.0 * MARGIN;
    for (i, name) in classes.iter().enumerate() {
        let ly = MARGIN + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx}" y="{ly}" width="12" height="12" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            palette_color(i),
            lx + 18.0,
            ly + 10.0,
            escape(name)
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_scatter(
    points: ArrayView2<f64>,
    labels: &[usize],
    classes: &[String],
    path: impl AsRef<Path>,
) -> Result<(), EvalError> {
    std::fs::write(path, render_scatter(points, labels, classes)?)?;
    Ok(())
}
