//! Deterministic SVG line charts: fixed 800x500 canvas per panel, log or
//! linear axes, one polyline per series, identical input producing
//! byte-identical output.

use consensus_core::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub const CANVAS_W: f64 = 800.0;
pub const CANVAS_H: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Axes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_log: bool,
    pub y_log: bool,
}

fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 0.01 && a < 10000.0 {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

struct Scale {
    min: f64,
    max: f64,
    log: bool,
    lo_px: f64,
    hi_px: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        let (a, b, x) = if self.log {
            (self.min.ln(), self.max.ln(), v.ln())
        } else {
            (self.min, self.max, v)
        };
        let frac = if b > a { (x - a) / (b - a) } else { 0.5 };
        self.lo_px + frac * (self.hi_px - self.lo_px)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let lo = self.min.log10().floor() as i32;
            let hi = self.max.log10().ceil() as i32;
            (lo..=hi)
                .map(|e| 10f64.powi(e))
                .filter(|t| *t >= self.min * 0.999 && *t <= self.max * 1.001)
                .collect()
        } else {
            let span = self.max - self.min;
            if span <= 0.0 {
                return vec![self.min];
            }
            let raw = span / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|s| span / s <= 6.0)
                .unwrap_or(mag * 10.0);
            let mut t = (self.min / step).ceil() * step;
            let mut out = Vec::new();
            while t <= self.max + step * 1e-9 {
                out.push(t);
                t += step;
            }
            out
        }
    }
}

/// Render one chart to an SVG string. Errors if there are no series or any
/// series is empty, or if a log axis sees a non-positive value.
pub fn render_svg(series: &[Series], axes: &Axes) -> Result<String> {
    let body = render_panel(series, axes, 0.0, 0.0)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS_W}\" height=\"{CANVAS_H}\" viewBox=\"0 0 {CANVAS_W} {CANVAS_H}\">"
    );
    out.push_str(&body);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Render a grid of panels into one SVG (row-major, `cols` panels per row).
pub fn render_panel_grid(panels: &[(Vec<Series>, Axes)], cols: usize) -> Result<String> {
    if panels.is_empty() || cols == 0 {
        return Err(Error::InvalidInput("no panels to render".into()));
    }
    let rows = panels.len().div_ceil(cols);
    let total_w = CANVAS_W * cols as f64;
    let total_h = CANVAS_H * rows as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w}\" height=\"{total_h}\" viewBox=\"0 0 {total_w} {total_h}\">"
    );
    for (i, (series, axes)) in panels.iter().enumerate() {
        let dx = (i % cols) as f64 * CANVAS_W;
        let dy = (i / cols) as f64 * CANVAS_H;
        out.push_str(&render_panel(series, axes, dx, dy)?);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn render_panel(series: &[Series], axes: &Axes, dx: f64, dy: f64) -> Result<String> {
    if series.is_empty() {
        return Err(Error::InvalidInput("no series to plot".into()));
    }
    for s in series {
        if s.points.is_empty() {
            return Err(Error::InvalidInput(format!("series {:?} is empty", s.label)));
        }
        for &(x, y) in &s.points {
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "series {:?} has a non-finite point",
                    s.label
                )));
            }
            if (axes.x_log && x <= 0.0) || (axes.y_log && y <= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "series {:?} has non-positive value on a log axis",
                    s.label
                )));
            }
        }
    }

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    // Degenerate ranges get a symmetric pad.
    if x_min == x_max {
        let pad = if axes.x_log { 0.5 * x_min } else { 0.5 * x_min.abs().max(1.0) };
        x_min -= pad * if axes.x_log { 0.9 } else { 1.0 };
        x_max += pad;
    }
    if y_min == y_max {
        let pad = if axes.y_log { 0.5 * y_min } else { 0.5 * y_min.abs().max(1.0) };
        y_min -= pad * if axes.y_log { 0.9 } else { 1.0 };
        y_max += pad;
    }
    let xs = Scale {
        min: x_min,
        max: x_max,
        log: axes.x_log,
        lo_px: dx + MARGIN_L,
        hi_px: dx + CANVAS_W - MARGIN_R,
    };
    let ys = Scale {
        min: y_min,
        max: y_max,
        log: axes.y_log,
        lo_px: dy + CANVAS_H - MARGIN_B,
        hi_px: dy + MARGIN_T,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<rect x=\"{dx}\" y=\"{dy}\" width=\"{CANVAS_W}\" height=\"{CANVAS_H}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        dx + CANVAS_W / 2.0,
        dy + 22.0,
        escape(&axes.title)
    );

    // Frame.
    let _ = writeln!(
        out,
        "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#444\"/>",
        dx + MARGIN_L,
        dy + MARGIN_T,
        CANVAS_W - MARGIN_L - MARGIN_R,
        CANVAS_H - MARGIN_T - MARGIN_B
    );

    for t in xs.ticks() {
        let px = xs.map(t);
        let _ = writeln!(
            out,
            "<line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"#ddd\"/>",
            dy + MARGIN_T,
            dy + CANVAS_H - MARGIN_B
        );
        let _ = writeln!(
            out,
            "<text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            dy + CANVAS_H - MARGIN_B + 16.0,
            fmt_num(t)
        );
    }
    for t in ys.ticks() {
        let py = ys.map(t);
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{:.1}\" y2=\"{py:.1}\" stroke=\"#ddd\"/>",
            dx + MARGIN_L,
            dx + CANVAS_W - MARGIN_R
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{py:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            dx + MARGIN_L - 6.0,
            fmt_num(t)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
        dx + (MARGIN_L + CANVAS_W - MARGIN_R) / 2.0,
        dy + CANVAS_H - 12.0,
        escape(&axes.x_label)
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 {:.1} {:.1})\">{}</text>",
        dx + 18.0,
        dy + CANVAS_H / 2.0,
        dx + 18.0,
        dy + CANVAS_H / 2.0,
        escape(&axes.y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut path = String::new();
        for (j, &(x, y)) in s.points.iter().enumerate() {
            if j > 0 {
                path.push(' ');
            }
            let _ = write!(path, "{:.2},{:.2}", xs.map(x), ys.map(y));
        }
        let _ = writeln!(
            out,
            "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
        );
        // Legend rows clutter dense per-node plots; only label small charts.
        if series.len() <= 8 {
            let ly = dy + MARGIN_T + 14.0 + 16.0 * i as f64;
            let lx = dx + MARGIN_L + 10.0;
            let _ = writeln!(
                out,
                "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                lx + 18.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
                lx + 24.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
    }
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn emit_svg(series: &[Series], axes: &Axes, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(series, axes)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_series() -> Vec<Series> {
        vec![
            Series {
                label: "a".into(),
                points: vec![(1.0, 1.0), (2.0, 4.0), (3.0, 9.0)],
            },
            Series {
                label: "b".into(),
                points: vec![(1.0, 2.0), (2.0, 3.0), (3.0, 5.0)],
            },
        ]
    }

    fn axes() -> Axes {
        Axes {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            x_log: false,
            y_log: false,
        }
    }

    #[test]
    fn two_series_give_two_polylines() {
        let svg = render_svg(&two_series(), &axes()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_series_is_an_error() {
        assert!(render_svg(&[], &axes()).is_err());
        let empty = vec![Series {
            label: "e".into(),
            points: vec![],
        }];
        assert!(render_svg(&empty, &axes()).is_err());
    }

    #[test]
    fn identical_input_is_byte_identical() {
        let s1 = render_svg(&two_series(), &axes()).unwrap();
        let s2 = render_svg(&two_series(), &axes()).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn log_axis_rejects_non_positive() {
        let series = vec![Series {
            label: "bad".into(),
            points: vec![(1.0, 0.0)],
        }];
        let mut ax = axes();
        ax.y_log = true;
        assert!(render_svg(&series, &ax).is_err());
    }

    #[test]
    fn grid_stacks_panels() {
        let panels = vec![
            (two_series(), axes()),
            (two_series(), axes()),
            (two_series(), axes()),
            (two_series(), axes()),
        ];
        let svg = render_panel_grid(&panels, 2).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 8);
        assert!(svg.contains("width=\"1600\""));
        assert!(svg.contains("height=\"1000\""));
    }
}
