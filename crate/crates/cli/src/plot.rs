//! Line charts of aggregate CSVs: one line per series with a ±1 stderr band.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use thiserror::Error;

use crate::output::AGGREGATE_HEADER;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("missing columns: {}", .0.join(", "))]
    MissingColumns(Vec<String>),
    #[error("no data rows to plot")]
    Empty,
    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    Parse { row: usize, column: String, value: String },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub x: String,
    pub y: String,
    pub series: String,
    /// Only rows with this metric; defaults to the first metric in the file.
    pub metric: Option<String>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        Self { x: "m".into(), y: "mean".into(), series: "alpha".into(), metric: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Point {
    x: f64,
    y: f64,
    err: f64,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn parse_num(row: usize, column: &str, value: &str) -> Result<f64, PlotError> {
    value.parse().map_err(|_| PlotError::Parse { row, column: column.to_string(), value: value.to_string() })
}

/// Ascending tick values covering `[lo, hi]` with a 1-2-5 step.
fn ticks(lo: f64, hi: f64) -> (Vec<f64>, f64) {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|k| k * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), step)
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s.trim_start_matches(['-', '0', '.']).is_empty() {
        s[1..].to_string()
    } else {
        s
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 0.5 } else { 0.05 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

/// Reads an aggregate CSV and renders it as a standalone SVG document.
pub fn render_svg<R: Read>(input: R, spec: &PlotSpec) -> Result<String, PlotError> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    let mut wanted: Vec<&str> = AGGREGATE_HEADER.to_vec();
    for extra in [&spec.x, &spec.y, &spec.series] {
        if !wanted.contains(&extra.as_str()) {
            wanted.push(extra);
        }
    }
    let missing: Vec<String> =
        wanted.iter().filter(|c| !headers.iter().any(|h| h == **c)).map(|c| c.to_string()).collect();
    if !missing.is_empty() {
        return Err(PlotError::MissingColumns(missing));
    }
    let col = |name: &str| headers.iter().position(|h| h == name).expect("checked above");
    let (xi, yi, si, ei, mi) = (col(&spec.x), col(&spec.y), col(&spec.series), col("stderr"), col("metric"));
    let banded = spec.y == "mean";

    let mut metric = spec.metric.clone();
    let mut series: BTreeMap<String, Vec<Point>> = BTreeMap::new();
    let mut rows = 0;
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        rows += 1;
        let row = k + 2;
        let this_metric = &record[mi];
        match &metric {
            None => metric = Some(this_metric.to_string()),
            Some(m) if m != this_metric => continue,
            Some(_) => {}
        }
        let x = parse_num(row, &spec.x, &record[xi])?;
        if !x.is_finite() {
            continue;
        }
        let y = parse_num(row, &spec.y, &record[yi])?;
        let err = if banded { parse_num(row, "stderr", &record[ei])? } else { 0.0 };
        series.entry(record[si].to_string()).or_default().push(Point { x, y, err });
    }
    if rows == 0 || series.is_empty() {
        return Err(PlotError::Empty);
    }
    let metric = metric.unwrap_or_default();

    let mut names: Vec<String> = series.keys().cloned().collect();
    if names.iter().all(|n| n.parse::<f64>().is_ok()) {
        names.sort_by(|a, b| a.parse::<f64>().unwrap().total_cmp(&b.parse::<f64>().unwrap()));
    }
    for points in series.values_mut() {
        points.sort_by(|a, b| a.x.total_cmp(&b.x));
    }

    let all = series.values().flatten();
    let (x_lo, x_hi) = all.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
    let (y_lo, y_hi) =
        all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.y - p.err), hi.max(p.y + p.err)));
    let (x_lo, x_hi) = padded(x_lo, x_hi);
    let (y_lo, y_hi) = padded(y_lo, y_hi);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, "<title>{} vs {} ({})</title>", escape(&spec.y), escape(&spec.x), escape(&metric));
    let _ = writeln!(w, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ =
        writeln!(w, r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#);

    let (xt, xstep) = ticks(x_lo, x_hi);
    for t in xt {
        let x = sx(t);
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 18.0,
            tick_label(t, xstep)
        );
    }
    let (yt, ystep) = ticks(y_lo, y_hi);
    for t in yt {
        let y = sy(t);
        let _ = writeln!(w, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            y + 4.0,
            tick_label(t, ystep)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&spec.x)
    );
    let _ = writeln!(
        w,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{} {}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(&metric),
        escape(&spec.y)
    );

    for (k, name) in names.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points = &series[name];
        let _ = writeln!(w, r#"<g class="series" data-{}="{}">"#, escape(&spec.series), escape(name));
        if points.len() == 1 {
            let p = &points[0];
            let _ = writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}"/>"#, sx(p.x), sy(p.y));
        } else {
            if points.iter().any(|p| p.err > 0.0) {
                let upper = points.iter().map(|p| format!("{:.2},{:.2}", sx(p.x), sy(p.y + p.err)));
                let lower = points.iter().rev().map(|p| format!("{:.2},{:.2}", sx(p.x), sy(p.y - p.err)));
                let outline: Vec<String> = upper.chain(lower).collect();
                let _ = writeln!(
                    w,
                    r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                    outline.join(" ")
                );
            }
            let line: Vec<String> = points.iter().map(|p| format!("{:.2},{:.2}", sx(p.x), sy(p.y))).collect();
            let _ = writeln!(
                w,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                line.join(" ")
            );
        }
        let _ = writeln!(w, "</g>");
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(w, r#"<rect x="{lx:.2}" y="{:.2}" width="14" height="4" fill="{color}"/>"#, ly - 2.0);
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}">{} = {}</text>"#,
            lx + 20.0,
            ly + 4.0,
            escape(&spec.series),
            escape(name)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}
