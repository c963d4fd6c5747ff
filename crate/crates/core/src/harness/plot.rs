//! SVG figures of sweep summaries, plus plain-text `.dat` tables with the
//! plotted numbers.
//!
//! Numeric sweep axes become x-axes of line plots (success rate and mean
//! iterations); the remaining swept parameters label the series. When both
//! `sigma_f` and the dimension are swept, a success-rate heatmap is drawn too.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use plotters::prelude::*;

use super::report::SummaryRow;
use crate::{Error, Result};

const SIZE: (u32, u32) = (720, 480);
const SIGMA_KEYS: [&str; 1] = ["sigma_f"];
const DIM_KEYS: [&str; 2] = ["dimension", "d"];

fn tokens(grid: &str) -> Vec<(&str, &str)> {
    grid.split_whitespace()
        .filter_map(|t| t.split_once('='))
        .collect()
}

/// Axis keys appearing in the rows with at least two distinct numeric values.
fn numeric_axes(rows: &[SummaryRow]) -> Vec<String> {
    let mut seen: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut order = Vec::new();
    for row in rows {
        for (k, v) in tokens(&row.grid) {
            if v.parse::<f64>().is_err() {
                continue;
            }
            let vals = seen.entry(k.to_string()).or_insert_with(|| {
                order.push(k.to_string());
                Vec::new()
            });
            if !vals.iter().any(|x| x == v) {
                vals.push(v.to_string());
            }
        }
    }
    order.into_iter().filter(|k| seen[k].len() >= 2).collect()
}

fn value_of(row: &SummaryRow, key: &str) -> Option<f64> {
    tokens(&row.grid)
        .into_iter()
        .find(|(k, _)| *k == key)
        .and_then(|(_, v)| v.parse().ok())
}

fn series_label(row: &SummaryRow, skip: &[&str]) -> String {
    let rest: Vec<String> = tokens(&row.grid)
        .into_iter()
        .filter(|(k, _)| !skip.contains(k))
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    if rest.is_empty() {
        "all".into()
    } else {
        rest.join(" ")
    }
}

type Series = BTreeMap<String, Vec<(f64, f64)>>;

fn collect(rows: &[SummaryRow], key: &str, y: impl Fn(&SummaryRow) -> Option<f64>) -> Series {
    let mut out: Series = BTreeMap::new();
    for row in rows {
        if let (Some(x), Some(v)) = (value_of(row, key), y(row)) {
            out.entry(series_label(row, &[key]))
                .or_default()
                .push((x, v));
        }
    }
    for pts in out.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

fn plot_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Plot {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn bounds(series: &Series) -> ((f64, f64), (f64, f64)) {
    let pts = series.values().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let pad = |lo: f64, hi: f64| {
        let w = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
        (lo - 0.05 * w, hi + 0.05 * w)
    };
    (pad(x0, x1), pad(y0, y1))
}

fn line_plot(path: &Path, series: &Series, x_label: &str, y_label: &str) -> Result<()> {
    let ((x0, x1), (y0, y1)) = bounds(series);
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(path, e))?;
    let mut chart = ChartBuilder::on(&root)
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| plot_err(path, e))?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(|e| plot_err(path, e))?;
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
            .map_err(|e| plot_err(path, e))?
            .label(name.as_str())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 16, y)], color.stroke_width(2))
            });
        chart
            .draw_series(pts.iter().map(|&p| Circle::new(p, 3, color.filled())))
            .map_err(|e| plot_err(path, e))?;
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| plot_err(path, e))?;
    root.present().map_err(|e| plot_err(path, e))
}

fn write_dat(path: &Path, header: &str, series: &Series) -> Result<()> {
    let mut text = format!("# series\t{header}\n");
    for (name, pts) in series {
        for (x, y) in pts {
            let _ = writeln!(text, "{name}\t{x}\t{y}");
        }
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn heatmap(path: &Path, cells: &[(f64, f64, f64)], x_label: &str, y_label: &str) -> Result<()> {
    let mut xs: Vec<f64> = cells.iter().map(|c| c.0).collect();
    let mut ys: Vec<f64> = cells.iter().map(|c| c.1).collect();
    for v in [&mut xs, &mut ys] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(path, e))?;
    let (nx, ny) = (xs.len(), ys.len());
    let mut chart = ChartBuilder::on(&root)
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(0..nx, 0..ny)
        .map_err(|e| plot_err(path, e))?;
    let (fx, fy) = (xs.clone(), ys.clone());
    chart
        .configure_mesh()
        .disable_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .x_labels(nx + 1)
        .y_labels(ny + 1)
        .x_label_formatter(&|i| fx.get(*i).map(|v| v.to_string()).unwrap_or_default())
        .y_label_formatter(&|i| fy.get(*i).map(|v| v.to_string()).unwrap_or_default())
        .draw()
        .map_err(|e| plot_err(path, e))?;
    let pos = |v: &[f64], x: f64| {
        v.iter()
            .position(|&u| u == x)
            .expect("value collected above")
    };
    chart
        .draw_series(cells.iter().map(|&(x, y, rate)| {
            let (i, j) = (pos(&xs, x), pos(&ys, y));
            // White for zero success, dark blue for full success.
            let shade = (255.0 * (1.0 - rate.clamp(0.0, 1.0))) as u8;
            Rectangle::new(
                [(i, j), (i + 1, j + 1)],
                RGBColor(shade, shade, 255).filled(),
            )
        }))
        .map_err(|e| plot_err(path, e))?;
    root.present().map_err(|e| plot_err(path, e))
}

fn safe(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Render every applicable figure for `rows` into `out_dir`.
pub fn render(rows: &[SummaryRow], out_dir: &Path) -> Result<Vec<PathBuf>> {
    let rows: Vec<SummaryRow> = rows.iter().filter(|r| r.error.is_none()).cloned().collect();
    let mut written = Vec::new();
    let axes = numeric_axes(&rows);

    for key in &axes {
        let rate = collect(&rows, key, |r| Some(r.success_rate));
        let iters = collect(&rows, key, |r| r.iter_mean);
        let stem = safe(key);
        for (name, series, y_label) in [
            (format!("success_vs_{stem}"), &rate, "success rate"),
            (format!("iterations_vs_{stem}"), &iters, "mean iterations"),
        ] {
            if series.is_empty() {
                continue;
            }
            let svg = out_dir.join(format!("{name}.svg"));
            line_plot(&svg, series, key, y_label)?;
            let dat = out_dir.join(format!("{name}.dat"));
            write_dat(&dat, &format!("{key}\t{y_label}"), series)?;
            written.push(svg);
            written.push(dat);
        }
    }

    let sigma = axes.iter().find(|k| SIGMA_KEYS.contains(&k.as_str()));
    let dim = axes.iter().find(|k| DIM_KEYS.contains(&k.as_str()));
    if let (Some(sk), Some(dk)) = (sigma, dim) {
        let mut groups: BTreeMap<String, Vec<(f64, f64, f64)>> = BTreeMap::new();
        for row in &rows {
            if let (Some(s), Some(d)) = (value_of(row, sk), value_of(row, dk)) {
                groups
                    .entry(series_label(row, &[sk.as_str(), dk.as_str()]))
                    .or_default()
                    .push((s, d, row.success_rate));
            }
        }
        for (name, cells) in &groups {
            let stem = if groups.len() == 1 {
                "success_heatmap".to_string()
            } else {
                format!("success_heatmap_{}", safe(name))
            };
            let svg = out_dir.join(format!("{stem}.svg"));
            heatmap(&svg, cells, sk, dk)?;
            let dat = out_dir.join(format!("{stem}.dat"));
            let mut text = format!("# {sk}\t{dk}\tsuccess_rate\n");
            for (s, d, r) in cells {
                let _ = writeln!(text, "{s}\t{d}\t{r}");
            }
            fs::write(&dat, text).map_err(|e| Error::io(&dat, e))?;
            written.push(svg);
            written.push(dat);
        }
    }
    Ok(written)
}
