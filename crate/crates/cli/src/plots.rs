//! Plotter-agnostic plot descriptions.
//!
//! Each figure gets a `<figure>.plot.toml` next to its CSV. It names the CSV
//! by relative path and lists one series per distinct row selection, as
//! column filters, so any plotting tool can rebuild the curves.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{io_err, CliError, Result};
use crate::figures::{SNAPSHOT, TEMPORAL};
use crate::output::{read_csv, ResultRow};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotScript {
    pub figure: String,
    pub title: String,
    pub csv: String,
    pub panels: Vec<Panel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Panel {
    pub metric: String,
    pub x: Axis,
    pub y: Axis,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub column: String,
    pub label: String,
    pub scale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    /// Column name to required value.
    pub filter: BTreeMap<String, String>,
    pub style: String,
    pub error_column: Option<String>,
}

fn title(figure: &str) -> &'static str {
    match figure {
        "fig3" => "Usable bandwidth versus distance",
        "fig4" => "Connection probability versus AP density",
        "fig5" => "Ergodic capacity of closest-LOS multi-connectivity",
        "fig6" => "Capacity gain over single connectivity, W1",
        "fig7" => "Capacity gain over single connectivity, W2",
        _ => "",
    }
}

fn axis(column: &str, label: &str, scale: &str) -> Axis {
    Axis {
        column: column.into(),
        label: label.into(),
        scale: scale.into(),
    }
}

fn axes(metric: &str) -> (Axis, Axis) {
    let density = || axis("lambda_a", "AP density (1/m^2)", "log");
    match metric {
        "path_loss_db" => (
            axis("frequency_hz", "Frequency (Hz)", "linear"),
            axis("value", "Path loss (dB)", "linear"),
        ),
        "usable_bandwidth_hz" | "band_lo_hz" | "band_hi_hz" => (
            axis("distance_m", "Distance (m)", "linear"),
            axis("value", "Frequency (Hz)", "linear"),
        ),
        "connection_probability" => (density(), axis("value", "Connection probability", "linear")),
        "ergodic_capacity_bps" => (density(), axis("value", "Average ergodic capacity (bit/s)", "linear")),
        "capacity_gain" => (density(), axis("value", "Capacity gain", "linear")),
        "gain_argmax" => (density(), axis("value", "Maximum capacity gain", "linear")),
        _ => (density(), axis("value", metric, "linear")),
    }
}

fn source(estimator: &str) -> &'static str {
    match estimator {
        SNAPSHOT | TEMPORAL => "simulation",
        _ => "analysis",
    }
}

/// Series key of a row within its metric panel.
fn series_of(row: &ResultRow) -> (String, BTreeMap<String, String>, String) {
    let mut filter = BTreeMap::new();
    filter.insert("metric".to_string(), row.metric.clone());
    let mut label = Vec::new();
    if !row.window.is_empty() {
        filter.insert("window".into(), row.window.clone());
        label.push(row.window.clone());
    }
    if row.metric == "path_loss_db" {
        let d = row.distance_m.unwrap_or_default();
        filter.insert("distance_m".into(), d.to_string());
        label.push(format!("{d} m"));
    }
    if !row.strategy.is_empty() {
        filter.insert("strategy".into(), row.strategy.clone());
        label.push(row.strategy.clone());
    }
    if let Some(n) = row.degree {
        filter.insert("degree".into(), n.to_string());
        label.push(format!("N={n}"));
    }
    let style = if row.metric.starts_with("band_") || row.metric == "usable_bandwidth_hz" {
        label.push(row.metric.trim_end_matches("_hz").to_string());
        "line"
    } else if source(&row.estimator) == "simulation" {
        filter.insert("estimator".into(), row.estimator.clone());
        label.push("simulation".into());
        "markers"
    } else {
        if matches!(
            row.metric.as_str(),
            "connection_probability" | "ergodic_capacity_bps" | "capacity_gain"
        ) {
            label.push("analysis".into());
        }
        "line"
    };
    (label.join(" "), filter, style.into())
}

pub fn build_script(figure: &str, csv_name: &str, rows: &[ResultRow]) -> PlotScript {
    let mut panels: Vec<Panel> = Vec::new();
    for row in rows {
        let (label, filter, style) = series_of(row);
        let panel = match panels.iter_mut().position(|p| p.metric == row.metric) {
            Some(i) => &mut panels[i],
            None => {
                let (x, y) = axes(&row.metric);
                panels.push(Panel {
                    metric: row.metric.clone(),
                    x,
                    y,
                    series: Vec::new(),
                });
                panels.last_mut().expect("just pushed")
            }
        };
        if !panel.series.iter().any(|s| s.filter == filter) {
            let sampled = row.std_error > 0.0 || source(&row.estimator) == "simulation";
            panel.series.push(Series {
                label,
                filter,
                style,
                error_column: sampled.then(|| "std_error".to_string()),
            });
        }
    }
    PlotScript {
        figure: figure.into(),
        title: title(figure).into(),
        csv: csv_name.into(),
        panels,
    }
}

/// Writes `<stem>.plot.toml` next to each CSV. Fails before writing
/// anything if a CSV is missing.
pub fn emit_plots(csv_paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let missing: Vec<PathBuf> = csv_paths.iter().filter(|p| !p.is_file()).cloned().collect();
    if !missing.is_empty() {
        return Err(CliError::MissingCsv(missing));
    }
    let mut written = Vec::new();
    for path in csv_paths {
        let rows = read_csv(path)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("figure");
        let name = path.file_name().and_then(|s| s.to_str()).unwrap_or_default();
        let figure = rows.first().map_or(stem, |r| r.figure.as_str());
        let script = build_script(figure, name, &rows);
        let text = toml::to_string_pretty(&script).expect("plot script serialises");
        let out = path.with_file_name(format!("{stem}.plot.toml"));
        write_text(&out, &text)?;
        written.push(out);
    }
    Ok(written)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_err(path))
}
