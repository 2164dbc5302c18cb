//! Dependency-free SVG line charts for sweep reports: one polyline per
//! (solver, r) series, optional log axes, least-squares slope annotations.

use std::fmt::Write as _;
use std::path::Path;

use super::{BenchError, ConvergenceReport, ReportRow, SolverKind};

/// Plottable columns of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    KModes,
    Time,
    Error,
    WallSeconds,
}

impl Axis {
    pub fn parse(token: &str) -> Result<Axis, BenchError> {
        match token {
            "K" => Ok(Axis::KModes),
            "t" => Ok(Axis::Time),
            "error" => Ok(Axis::Error),
            "wall_seconds" => Ok(Axis::WallSeconds),
            other => Err(BenchError::Config(format!(
                "unknown axis `{other}` (expected K, t, error or wall_seconds)"
            ))),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Axis::KModes => "K",
            Axis::Time => "t",
            Axis::Error => "error",
            Axis::WallSeconds => "wall_seconds",
        }
    }

    fn value(self, row: &ReportRow) -> f64 {
        match self {
            Axis::KModes => row.k_modes as f64,
            Axis::Time => row.t,
            Axis::Error => row.error,
            Axis::WallSeconds => row.wall_seconds,
        }
    }
}

/// Chart description: which columns to plot and on what scales.
#[derive(Debug, Clone, Copy)]
pub struct PlotSpec {
    pub x: Axis,
    pub y: Axis,
    pub logx: bool,
    pub logy: bool,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 630.0;
const TOP: f64 = 25.0;
const BOTTOM: f64 = 465.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Series {
    name: String,
    /// Points in plot coordinates (already log-transformed when requested).
    points: Vec<(f64, f64)>,
    slope: Option<f64>,
}

/// Renders the chart as a standalone SVG document.
pub fn render_svg(report: &ConvergenceReport, spec: &PlotSpec) -> Result<String, BenchError> {
    if report.rows.is_empty() {
        return Err(BenchError::Config("cannot plot an empty report".into()));
    }
    let series = collect_series(report, spec)?;

    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for s in &series {
        for &(x, y) in &s.points {
            xs.push(x);
            ys.push(y);
        }
    }
    let (x_min, x_max) = padded_bounds(&xs);
    let (y_min, y_max) = padded_bounds(&ys);
    let map_x = |v: f64| LEFT + (v - x_min) / (x_max - x_min) * (RIGHT - LEFT);
    let map_y = |v: f64| BOTTOM - (v - y_min) / (y_max - y_min) * (BOTTOM - TOP);

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // Grid and tick labels.
    for (v, label) in ticks(x_min, x_max, spec.logx) {
        let x = map_x(v);
        let _ = write!(
            svg,
            r##"<line x1="{x:.1}" y1="{TOP}" x2="{x:.1}" y2="{BOTTOM}" stroke="#dddddd"/>"##
        );
        let _ = write!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#,
            BOTTOM + 18.0
        );
    }
    for (v, label) in ticks(y_min, y_max, spec.logy) {
        let y = map_y(v);
        let _ = write!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{RIGHT}" y2="{y:.1}" stroke="#dddddd"/>"##
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#,
            LEFT - 8.0,
            y + 4.0
        );
    }

    // Frame and axis names.
    let _ = write!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}{}</text>"#,
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 10.0,
        spec.x.label(),
        if spec.logx { " (log)" } else { "" }
    );
    let _ = write!(
        svg,
        r#"<text x="12" y="16">{}{}</text>"#,
        spec.y.label(),
        if spec.logy { " (log)" } else { "" }
    );

    // Series polylines, legend and slope annotations.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for &(x, y) in &s.points {
            let _ = write!(points, "{:.2},{:.2} ", map_x(x), map_y(y));
        }
        let _ = write!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        for &(x, y) in &s.points {
            let _ = write!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                map_x(x),
                map_y(y)
            );
        }
        let legend_y = TOP + 15.0 + 20.0 * i as f64;
        let _ = write!(
            svg,
            r#"<line x1="{:.1}" y1="{legend_y:.1}" x2="{:.1}" y2="{legend_y:.1}" stroke="{color}" stroke-width="2"/>"#,
            RIGHT + 12.0,
            RIGHT + 36.0
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            RIGHT + 42.0,
            legend_y + 4.0,
            s.name
        );
        if let Some(slope) = s.slope {
            let _ = write!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" fill="{color}" data-slope="{slope:.3}">slope {slope:.3}</text>"#,
                RIGHT + 42.0,
                legend_y + 18.0
            );
        }
    }
    svg.push_str("</svg>");
    Ok(svg)
}

/// Renders and writes the chart to `path`.
pub fn emit_svg(
    report: &ConvergenceReport,
    spec: &PlotSpec,
    path: impl AsRef<Path>,
) -> Result<(), BenchError> {
    let svg = render_svg(report, spec)?;
    std::fs::write(path, svg)?;
    Ok(())
}

/// Groups rows into (solver, r) series in plot coordinates, dropping points
/// a log scale cannot show.
fn collect_series(report: &ConvergenceReport, spec: &PlotSpec) -> Result<Vec<Series>, BenchError> {
    let mut keys: Vec<(SolverKind, f64)> = report
        .rows
        .iter()
        .map(|row| (row.solver, row.r))
        .collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    keys.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    let multi_r = keys.iter().map(|k| k.1.to_bits()).collect::<std::collections::BTreeSet<_>>().len() > 1;

    let mut series = Vec::new();
    for (solver, r) in keys {
        let mut points: Vec<(f64, f64)> = Vec::new();
        for row in &report.rows {
            if row.solver != solver || row.r.to_bits() != r.to_bits() {
                continue;
            }
            let x = spec.x.value(row);
            let y = spec.y.value(row);
            if !x.is_finite() || !y.is_finite() {
                continue;
            }
            if (spec.logx && x <= 0.0) || (spec.logy && y <= 0.0) {
                continue;
            }
            points.push((
                if spec.logx { x.log10() } else { x },
                if spec.logy { y.log10() } else { y },
            ));
        }
        if points.is_empty() {
            continue;
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        series.push(Series {
            name: if multi_r {
                format!("{solver} (r={r})")
            } else {
                solver.to_string()
            },
            slope: fit_slope(&points),
            points,
        });
    }
    if series.is_empty() {
        return Err(BenchError::Config(
            "no plottable points (log scales drop non-positive values)".into(),
        ));
    }
    Ok(series)
}

/// Least-squares slope in plot coordinates; `None` when degenerate.
fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let var: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if var <= 0.0 {
        return None;
    }
    let cov: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    Some(cov / var)
}

fn padded_bounds(values: &[f64]) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if min > max {
        // No points survive filtering; collect_series errors before this.
        return (0.0, 1.0);
    }
    let span = max - min;
    if span <= 0.0 {
        (min - 0.5, max + 0.5)
    } else {
        (min - 0.05 * span, max + 0.05 * span)
    }
}

/// Tick positions and labels in plot coordinates: decades for log scales,
/// five even divisions otherwise.
fn ticks(min: f64, max: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let lo = min.ceil() as i64;
        let hi = max.floor() as i64;
        if lo <= hi && (hi - lo) <= 40 {
            return (lo..=hi).map(|n| (n as f64, format!("1e{n}"))).collect();
        }
    }
    (0..=4)
        .map(|i| {
            let v = min + (max - min) * i as f64 / 4.0;
            let label = if log {
                format!("1e{v:.1}")
            } else {
                format!("{v:.3}")
            };
            (v, label)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::CSV_HEADER;
    use super::*;

    fn report_from(rows: &[(&str, usize, f64, f64)]) -> ConvergenceReport {
        let mut text = format!("{CSV_HEADER}\n");
        for (solver, k, t, error) in rows {
            text.push_str(&format!(
                "bo,{solver},{k},{t},0.0,{error},1e-3,analytic\n"
            ));
        }
        ConvergenceReport::read_csv(text.as_bytes()).unwrap()
    }

    #[test]
    fn one_polyline_per_solver_series() {
        let report = report_from(&[
            ("exact-scheme", 8, 1.0, 1e-3),
            ("exact-scheme", 16, 1.0, 1e-5),
            ("rk4", 8, 1.0, 1e-2),
            ("rk4", 16, 1.0, 1e-4),
        ]);
        let spec = PlotSpec {
            x: Axis::KModes,
            y: Axis::Error,
            logx: true,
            logy: true,
        };
        let svg = render_svg(&report, &spec).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("exact-scheme") && svg.contains("rk4"));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>"));
    }

    #[test]
    fn two_row_single_solver_report_has_one_polyline() {
        let report = report_from(&[("exact-scheme", 8, 1.0, 1e-3), ("exact-scheme", 16, 1.0, 1e-5)]);
        let spec = PlotSpec {
            x: Axis::KModes,
            y: Axis::Error,
            logx: false,
            logy: false,
        };
        let svg = render_svg(&report, &spec).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn slope_annotation_matches_a_direct_fit() {
        // error = K^{-2} exactly, so the log-log slope must be -2.
        let rows: Vec<(&str, usize, f64, f64)> = [8usize, 16, 32, 64, 128]
            .iter()
            .map(|&k| ("exact-scheme", k, 1.0, (k as f64).powi(-2)))
            .collect();
        let report = report_from(&rows);
        let spec = PlotSpec {
            x: Axis::KModes,
            y: Axis::Error,
            logx: true,
            logy: true,
        };
        let svg = render_svg(&report, &spec).unwrap();
        let start = svg.find("data-slope=\"").expect("slope annotation") + 12;
        let end = start + svg[start..].find('"').unwrap();
        let annotated: f64 = svg[start..end].parse().unwrap();
        assert!(
            (annotated - (-2.0)).abs() < 0.05,
            "slope annotation {annotated} should match the power law -2"
        );
    }

    #[test]
    fn empty_and_unplottable_reports_are_rejected() {
        let empty = ConvergenceReport::default();
        let spec = PlotSpec {
            x: Axis::KModes,
            y: Axis::Error,
            logx: true,
            logy: true,
        };
        assert!(matches!(
            render_svg(&empty, &spec),
            Err(BenchError::Config(_))
        ));
        // All errors are zero: nothing survives the log filter.
        let zeros = report_from(&[("exact-scheme", 8, 1.0, 0.0)]);
        assert!(matches!(
            render_svg(&zeros, &spec),
            Err(BenchError::Config(_))
        ));
    }

    #[test]
    fn axis_tokens_parse_and_bad_ones_do_not() {
        assert_eq!(Axis::parse("K").unwrap(), Axis::KModes);
        assert_eq!(Axis::parse("t").unwrap(), Axis::Time);
        assert_eq!(Axis::parse("error").unwrap(), Axis::Error);
        assert_eq!(Axis::parse("wall_seconds").unwrap(), Axis::WallSeconds);
        assert!(Axis::parse("cost").is_err());
    }

    #[test]
    fn log_ticks_land_on_decades() {
        let t = ticks(-6.2, -1.8, true);
        let labels: Vec<&str> = t.iter().map(|(_, l)| l.as_str()).collect();
        assert_eq!(labels, vec!["1e-6", "1e-5", "1e-4", "1e-3", "1e-2"]);
    }
}
