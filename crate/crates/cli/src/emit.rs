//! Writers for the CSV, SVG and OBJ artifacts.
//!
//! Output is fully deterministic: fixed number formatting, LF line endings,
//! no timestamps.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use fermat_torus_core::torus::Point3;

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

/// Reals with 17 significant digits in scientific notation.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        // Also folds -0.
        return "0.0000000000000000e0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{v:.16e}")
}

fn write_file(path: &Path, body: &str) -> io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, body)
}

pub fn render_csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    let mut record = Vec::with_capacity(header.len());
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        record.clear();
        record.extend(row.iter().map(|cell| match cell {
            Cell::Real(v) => fmt_real(*v),
            Cell::Int(s) => s.clone(),
            Cell::Empty => String::new(),
        }));
        w.write_record(&record).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("ascii output")
}

pub fn emit_csv(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> io::Result<()> {
    write_file(path, &render_csv(header, rows))
}

/// A named polyline. Non-finite `y` values mark divergent samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axes {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Axes {
    /// Bounds of all finite points, padded when degenerate.
    pub fn fit(series: &[Series]) -> Axes {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for (px, py) in series.iter().flat_map(|s| s.points.iter()) {
            if px.is_finite() {
                x = (x.0.min(*px), x.1.max(*px));
            }
            if py.is_finite() {
                y = (y.0.min(*py), y.1.max(*py));
            }
        }
        let pad = |(lo, hi): (f64, f64)| {
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi - lo < 1e-12 {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        Axes {
            x: pad(x),
            y: pad(y),
        }
    }
}

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 90.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// Standalone SVG with one `polyline` per series, axis ticks and a legend.
///
/// Points outside `axes` (including infinities) are clamped to the plot
/// frame; each series with clamped points gets an XML comment saying so.
pub fn render_svg(series: &[Series], axes: Axes, title: &str) -> String {
    let plot = SIZE - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - axes.x.0) / (axes.x.1 - axes.x.0) * plot;
    let sy = |y: f64| SIZE - MARGIN - (y - axes.y.0) / (axes.y.1 - axes.y.0) * plot;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n",
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n");
    let _ = writeln!(
        out,
        "<text x=\"500\" y=\"40\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"24\">{}</text>",
        xml_escape(title)
    );
    let _ = writeln!(
        out,
        "<rect x=\"{m}\" y=\"{m}\" width=\"{p}\" height=\"{p}\" fill=\"none\" stroke=\"black\"/>",
        m = MARGIN,
        p = plot
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let xv = axes.x.0 + f * (axes.x.1 - axes.x.0);
        let yv = axes.y.0 + f * (axes.y.1 - axes.y.0);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            out,
            "<line x1=\"{px:.2}\" y1=\"{b:.2}\" x2=\"{px:.2}\" y2=\"{t:.2}\" stroke=\"black\"/>",
            b = SIZE - MARGIN,
            t = SIZE - MARGIN + 8.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{px:.2}\" y=\"{ty:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
            tick_label(xv),
            ty = SIZE - MARGIN + 28.0
        );
        let _ = writeln!(
            out,
            "<line x1=\"{l:.2}\" y1=\"{py:.2}\" x2=\"{r:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>",
            l = MARGIN - 8.0,
            r = MARGIN
        );
        let _ = writeln!(
            out,
            "<text x=\"{tx:.2}\" y=\"{py:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
            tick_label(yv),
            tx = MARGIN - 12.0
        );
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut clipped = 0usize;
        let mut divergent = 0usize;
        let mut pts = String::new();
        for &(x, y) in &s.points {
            if !y.is_finite() {
                divergent += 1;
            }
            let yc = if y.is_nan() {
                axes.y.0
            } else {
                y.clamp(axes.y.0, axes.y.1)
            };
            if yc != y {
                clipped += 1;
            }
            let xc = x.clamp(axes.x.0, axes.x.1);
            if !pts.is_empty() {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.3},{:.3}", sx(xc), sy(yc));
        }
        if clipped > 0 {
            let _ = writeln!(
                out,
                "<!-- {}: {clipped} sample(s) clipped to the viewport{} -->",
                xml_escape(&s.label).replace("--", "- -"),
                if divergent > 0 {
                    format!(", {divergent} at -inf")
                } else {
                    String::new()
                }
            );
        }
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{pts}\"/>"
        );
    }
    // Only the first ten series get a legend entry.
    for (i, s) in series.iter().enumerate().take(PALETTE.len()) {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN + 24.0 + 22.0 * i as f64;
        let x = SIZE - MARGIN - 170.0;
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{x2:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"3\"/>",
            x2 = x + 30.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{tx:.2}\" y=\"{ty:.2}\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
            xml_escape(&s.label),
            tx = x + 38.0,
            ty = y + 5.0
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg(path: &Path, series: &[Series], axes: Axes, title: &str) -> io::Result<()> {
    write_file(path, &render_svg(series, axes, title))
}

/// Wavefront text: `v x y z` per point, then `l i j` joining consecutive
/// points of each piece. Indices are 1-based and global across pieces.
pub fn render_obj(pieces: &[Vec<Point3>]) -> String {
    let total: usize = pieces.iter().map(Vec::len).sum();
    let mut out = String::with_capacity(total * 72);
    for p in pieces.iter().flatten() {
        let _ = writeln!(
            out,
            "v {} {} {}",
            fmt_real(p.x),
            fmt_real(p.y),
            fmt_real(p.z)
        );
    }
    let mut base = 0;
    for piece in pieces {
        for i in 1..piece.len() {
            let _ = writeln!(out, "l {} {}", base + i, base + i + 1);
        }
        base += piece.len();
    }
    out
}

pub fn emit_obj(path: &Path, pieces: &[Vec<Point3>]) -> io::Result<()> {
    write_file(path, &render_obj(pieces))
}
