//! File formats: CSV data series, grid exports, and SVG figure rendering.
//!
//! CSV files are plain comma-separated text with a mandatory header row;
//! lines starting with `#` are comments (used for provenance trailers).
//! Human-facing units at the file boundary: nm, mT, and SI seconds/hertz
//! as named by each header.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fitting::{NutationTrace, OdmrSpectrum};
use crate::grid::Grid2D;
use crate::locator::ContourLine;
use crate::wire_field::WireGeometry;

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Rows of parsed CSV: (1-based line number, fields).
fn read_csv_rows(path: &Path, expected_header: &[&str]) -> Result<Vec<(usize, Vec<f64>)>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    let mut header_seen = false;
    let mut n_cols = expected_header.len();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() < expected_header.len()
                || cols[..expected_header.len()] != expected_header[..]
            {
                return Err(parse_err(
                    path,
                    line_no,
                    format!(
                        "expected header starting with '{}', found '{line}'",
                        expected_header.join(",")
                    ),
                ));
            }
            n_cols = cols.len();
            header_seen = true;
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(path, line_no, format!("bad number: {e}")))?;
        if fields.len() != n_cols {
            return Err(parse_err(
                path,
                line_no,
                format!("expected {n_cols} fields, found {}", fields.len()),
            ));
        }
        rows.push((line_no, fields));
    }
    if !header_seen {
        return Err(parse_err(path, 1, "empty file, missing header"));
    }
    Ok(rows)
}

/// Writes an ODMR spectrum as `freq_hz,pl_cps[,noise_cps]` rows.
pub fn write_odmr_csv(path: &Path, s: &OdmrSpectrum, trailer: Option<&str>) -> Result<()> {
    let mut out = String::new();
    if s.noise.is_some() {
        out.push_str("freq_hz,pl_cps,noise_cps\n");
    } else {
        out.push_str("freq_hz,pl_cps\n");
    }
    for (i, (&f, &pl)) in s.frequencies.iter().zip(&s.pl).enumerate() {
        match &s.noise {
            Some(n) => writeln!(out, "{f:.6},{pl:.6},{:.6}", n[i]).unwrap(),
            None => writeln!(out, "{f:.6},{pl:.6}").unwrap(),
        }
    }
    if let Some(t) = trailer {
        writeln!(out, "# {t}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads `freq_hz,pl_cps[,noise_cps][,current_amp]`. The drive current
/// comes from the `current_amp` column when present, otherwise from
/// `current` (typically a sidecar manifest).
pub fn read_odmr_csv(path: &Path, current: Option<f64>) -> Result<OdmrSpectrum> {
    let text = fs::read_to_string(path)?;
    let header_line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let cols: Vec<&str> = header_line.split(',').map(str::trim).collect();
    let noise_col = cols.iter().position(|&c| c == "noise_cps");
    let current_col = cols.iter().position(|&c| c == "current_amp");

    let rows = read_csv_rows(path, &["freq_hz", "pl_cps"])?;
    if rows.is_empty() {
        return Err(parse_err(path, 1, "no data rows"));
    }
    let mut frequencies = Vec::with_capacity(rows.len());
    let mut pl = Vec::with_capacity(rows.len());
    let mut noise = Vec::new();
    let mut file_current = None;
    for (line_no, fields) in &rows {
        frequencies.push(fields[0]);
        pl.push(fields[1]);
        if let Some(k) = noise_col {
            noise.push(fields[k]);
        }
        if let Some(k) = current_col {
            let c = fields[k];
            if let Some(prev) = file_current {
                if c != prev {
                    return Err(parse_err(
                        path,
                        *line_no,
                        "current_amp column must be constant within one file",
                    ));
                }
            }
            file_current = Some(c);
        }
    }
    let spectrum = OdmrSpectrum {
        frequencies,
        pl,
        current: file_current.or(current).unwrap_or(0.0),
        noise: noise_col.map(|_| noise),
    };
    spectrum.validate().map_err(|e| match e {
        Error::Validation(msg) => parse_err(path, 1, msg),
        other => other,
    })?;
    Ok(spectrum)
}

/// Writes a nutation trace as `delay_s,contrast` rows.
pub fn write_nutation_csv(path: &Path, t: &NutationTrace, trailer: Option<&str>) -> Result<()> {
    let mut out = String::from("delay_s,contrast\n");
    for (&d, &s) in t.delays.iter().zip(&t.signal) {
        writeln!(out, "{d:.9e},{s:.8}").unwrap();
    }
    if let Some(tr) = trailer {
        writeln!(out, "# {tr}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads `delay_s,contrast[,current_amp]`.
pub fn read_nutation_csv(path: &Path, current: Option<f64>) -> Result<NutationTrace> {
    let text = fs::read_to_string(path)?;
    let header_line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let cols: Vec<&str> = header_line.split(',').map(str::trim).collect();
    let current_col = cols.iter().position(|&c| c == "current_amp");

    let rows = read_csv_rows(path, &["delay_s", "contrast"])?;
    let mut delays = Vec::with_capacity(rows.len());
    let mut signal = Vec::with_capacity(rows.len());
    let mut file_current = None;
    for (_, fields) in &rows {
        delays.push(fields[0]);
        signal.push(fields[1]);
        if let Some(k) = current_col {
            file_current = Some(fields[k]);
        }
    }
    let trace = NutationTrace {
        delays,
        signal,
        current: file_current.or(current).unwrap_or(0.0),
    };
    trace.validate().map_err(|e| match e {
        Error::Validation(msg) => parse_err(path, 1, msg),
        other => other,
    })?;
    Ok(trace)
}

/// Writes a field-magnitude grid as `x_nm,z_nm,b_mt` (tesla in, mT out).
pub fn write_field_grid_csv(path: &Path, grid: &Grid2D, trailer: Option<&str>) -> Result<()> {
    let mut out = String::from("x_nm,z_nm,b_mt\n");
    for (x, z, v) in grid.points() {
        writeln!(out, "{:.3},{:.3},{:.6}", x * 1e9, z * 1e9, v * 1e3).unwrap();
    }
    if let Some(t) = trailer {
        writeln!(out, "# {t}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes a probability-density grid as `x_nm,z_nm,density_per_nm2`.
pub fn write_density_grid_csv(path: &Path, grid: &Grid2D, trailer: Option<&str>) -> Result<()> {
    let mut out = String::from("x_nm,z_nm,density_per_nm2\n");
    for (x, z, v) in grid.points() {
        writeln!(out, "{:.3},{:.3},{:.8e}", x * 1e9, z * 1e9, v * 1e-18).unwrap();
    }
    if let Some(t) = trailer {
        writeln!(out, "# {t}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes bootstrap position samples as `x_nm,z_nm`.
pub fn write_samples_csv(path: &Path, samples: &[(f64, f64)], trailer: Option<&str>) -> Result<()> {
    let mut out = String::from("x_nm,z_nm\n");
    for &(x, z) in samples {
        writeln!(out, "{:.4},{:.4}", x * 1e9, z * 1e9).unwrap();
    }
    if let Some(t) = trailer {
        writeln!(out, "# {t}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

const VIRIDIS: [(f64, [f64; 3]); 9] = [
    (0.000, [68.0, 1.0, 84.0]),
    (0.125, [72.0, 40.0, 120.0]),
    (0.250, [62.0, 74.0, 137.0]),
    (0.375, [49.0, 104.0, 142.0]),
    (0.500, [38.0, 130.0, 142.0]),
    (0.625, [31.0, 158.0, 137.0]),
    (0.750, [53.0, 183.0, 121.0]),
    (0.875, [109.0, 205.0, 89.0]),
    (1.000, [253.0, 231.0, 37.0]),
];

fn viridis(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let mut lo = VIRIDIS[0];
    let mut hi = VIRIDIS[VIRIDIS.len() - 1];
    for w in VIRIDIS.windows(2) {
        if t >= w[0].0 && t <= w[1].0 {
            lo = w[0];
            hi = w[1];
            break;
        }
    }
    let f = if hi.0 > lo.0 { (t - lo.0) / (hi.0 - lo.0) } else { 0.0 };
    let c: Vec<u8> = (0..3)
        .map(|k| (lo.1[k] + f * (hi.1[k] - lo.1[k])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// A labeled contour family for the overlay renderer.
pub struct ContourSet {
    pub lines: Vec<ContourLine>,
    pub color: String,
    pub label: String,
}

/// Renders the field-magnitude map with the wire cross-section, the
/// diamond surface line at z′ = 0 and optional contour overlays, in the
/// layout of the localization figure. Deterministic output bytes.
pub fn render_field_svg(
    grid: &Grid2D,
    geometry: &WireGeometry,
    contours: &[ContourSet],
    comment: Option<&str>,
) -> String {
    let spec = &grid.spec;
    let plot_w = 640.0;
    let extent_x = (spec.x_max - spec.x_min).max(f64::MIN_POSITIVE);
    let extent_z = (spec.z_max - spec.z_min).max(f64::MIN_POSITIVE);
    let plot_h = (plot_w * extent_z / extent_x).clamp(120.0, 640.0);
    let margin = 60.0;
    let width = plot_w + 2.0 * margin;
    let height = plot_h + 2.0 * margin;

    // z points up: larger z at smaller pixel y.
    let px = |x: f64| margin + (x - spec.x_min) / extent_x * plot_w;
    let py = |z: f64| margin + (spec.z_max - z) / extent_z * plot_h;

    let positive_min = grid
        .values
        .iter()
        .copied()
        .filter(|v| *v > 0.0)
        .fold(f64::INFINITY, f64::min);
    let vmax = grid.max_value().max(f64::MIN_POSITIVE);
    let vmin = positive_min.min(vmax).max(vmax * 1e-4);
    let color_of = |v: f64| {
        let t = if v <= vmin {
            0.0
        } else {
            (v / vmin).ln() / (vmax / vmin).ln()
        };
        viridis(t)
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    if let Some(c) = comment {
        writeln!(svg, "<!-- {c} -->").unwrap();
    }
    writeln!(
        svg,
        r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    )
    .unwrap();

    // Heatmap cells (centered on grid nodes).
    let cw = if spec.nx > 1 { plot_w / (spec.nx - 1) as f64 } else { plot_w };
    let ch = if spec.nz > 1 { plot_h / (spec.nz - 1) as f64 } else { plot_h };
    for (x, z, v) in grid.points() {
        writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            px(x) - 0.5 * cw,
            py(z) - 0.5 * ch,
            cw + 0.1,
            ch + 0.1,
            color_of(v)
        )
        .unwrap();
    }

    // Wire cross-section outline (z in [0, t], x in [-w/2, w/2]).
    let (wx0, wx1) = (px(-0.5 * geometry.width), px(0.5 * geometry.width));
    let (wy0, wy1) = (py(geometry.thickness), py(0.0));
    if wy0 < margin + plot_h && wy1 > margin {
        writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="white" stroke-width="1.5"/>"#,
            wx0.max(margin),
            wy0.max(margin),
            (wx1 - wx0).min(plot_w),
            (wy1 - wy0).min(plot_h),
        )
        .unwrap();
    }

    // Diamond surface.
    if spec.z_min <= 0.0 && spec.z_max >= 0.0 {
        writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="red" stroke-width="2"/>"#,
            margin,
            py(0.0),
            margin + plot_w,
            py(0.0)
        )
        .unwrap();
    }

    for set in contours {
        for line in &set.lines {
            if line.is_empty() {
                continue;
            }
            let points: Vec<String> = line
                .iter()
                .map(|&(x, z)| format!("{:.2},{:.2}", px(x), py(z)))
                .collect();
            writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                points.join(" "),
                set.color
            )
            .unwrap();
        }
    }

    // Axis annotations.
    writeln!(
        svg,
        r#"<text x="{:.0}" y="{:.0}" font-size="13" fill="black">x' (nm): {:.0} to {:.0}</text>"#,
        margin,
        height - 18.0,
        spec.x_min * 1e9,
        spec.x_max * 1e9
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="12" y="{:.0}" font-size="13" fill="black" transform="rotate(-90 12 {:.0})">z' (nm): {:.0} to {:.0}</text>"#,
        margin + plot_h,
        margin + plot_h,
        spec.z_min * 1e9,
        spec.z_max * 1e9
    )
    .unwrap();
    let mut legend_y = margin - 10.0;
    for set in contours {
        writeln!(
            svg,
            r#"<text x="{:.0}" y="{legend_y:.0}" font-size="12" fill="{}">{}</text>"#,
            margin + plot_w - 200.0,
            set.color,
            set.label
        )
        .unwrap();
        legend_y -= 14.0;
    }
    writeln!(svg, "</svg>").unwrap();
    svg
}
