use std::path::Path;

use anyhow::Result;
use clap::Parser;
use serde_json::json;

use nvloc::grid::GridSpec;
use nvloc::io::{
    render_field_svg, write_density_grid_csv, write_samples_csv, ContourSet,
};
use nvloc::locator::{
    bootstrap_positions, fit_position, position_pdf, summarize, AlphaMeasurement, Bandwidth,
    HalfPlane, LocalizationMode,
};
use nvloc::wire_field::field_magnitude_grid;

use crate::config::RunConfig;

#[derive(Parser, Debug)]
pub struct Args {
    /// Measured axial field-to-current ratio, T/A (≡ mT/mA).
    #[arg(long)]
    pub alpha_z_t_per_a: f64,
    /// Measured transverse field-to-current ratio, T/A.
    #[arg(long)]
    pub alpha_perp_t_per_a: f64,
    /// Shared 1σ uncertainty of both ratios, T/A.
    #[arg(long, default_value_t = 0.02)]
    pub sigma_alpha_t_per_a: f64,
    /// Uncertainty model: `infinite` or `finite-length` (adds the
    /// relative field errors from the config prior).
    #[arg(long, default_value = "infinite")]
    pub mode: String,
    /// Bootstrap draws (default from config).
    #[arg(long)]
    pub n: Option<usize>,
    /// Bootstrap seed (default from config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Force the x′ half-plane: `auto`, `neg` or `pos`.
    #[arg(long, default_value = "auto")]
    pub half_plane: String,
    /// Current for the background field map, µA.
    #[arg(long, default_value_t = 1000.0)]
    pub map_current_ua: f64,
}

pub fn run(args: &Args, cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let geometry = cfg.wire.to_geometry()?;
    let axis = cfg.nv_axis.to_axis()?;
    let prior = cfg.prior.to_prior(&cfg.wire);
    let mode = match args.mode.as_str() {
        "infinite" => LocalizationMode::Infinite,
        "finite-length" | "finite_length" | "finite" => LocalizationMode::FiniteLength,
        other => {
            return Err(nvloc::Error::validation(format!(
                "unknown mode '{other}': use infinite or finite-length"
            ))
            .into())
        }
    };
    let half_plane = match args.half_plane.as_str() {
        "auto" => HalfPlane::Auto,
        "neg" => HalfPlane::NegativeX,
        "pos" => HalfPlane::PositiveX,
        other => {
            return Err(nvloc::Error::validation(format!(
                "unknown half-plane '{other}': use auto, neg or pos"
            ))
            .into())
        }
    };
    let m = AlphaMeasurement {
        alpha_z: args.alpha_z_t_per_a,
        alpha_perp: args.alpha_perp_t_per_a,
        sigma_alpha: args.sigma_alpha_t_per_a,
    };
    let n = args.n.unwrap_or(cfg.bootstrap.n);
    let seed = args.seed.unwrap_or(cfg.bootstrap.seed);
    let hash = cfg.sha256();
    let trailer = format!("config_sha256={hash}");

    // Point fit on the central measurement, then the bootstrap cloud.
    let point = fit_position(
        &m,
        &geometry,
        &axis,
        cfg.model.to_model(),
        half_plane,
    )?;
    let boot = bootstrap_positions(&m, &prior, &axis, mode, geometry.length, n, seed)?;
    let estimate = summarize(&boot.samples)?;

    // Density grid: tight box around the samples.
    let pad_x = (6.0 * estimate.std_x).max(3e-9);
    let pad_z = (6.0 * estimate.std_z).max(3e-9);
    let density_spec = GridSpec {
        x_min: estimate.x - pad_x,
        x_max: estimate.x + pad_x,
        nx: 101,
        z_min: estimate.z - pad_z,
        z_max: estimate.z + pad_z,
        nz: 101,
    };
    let pdf = position_pdf(&boot.samples, &density_spec, Bandwidth::Silverman)?;

    write_samples_csv(&out_dir.join("samples.csv"), &boot.samples, Some(&trailer))?;
    write_density_grid_csv(&out_dir.join("pdf.csv"), &pdf.grid, Some(&trailer))?;

    // Overlay: field magnitude background with iso-probability contours
    // at the 1σ/2σ/3σ mass levels.
    let field_grid = field_magnitude_grid(
        &geometry,
        args.map_current_ua * 1e-6,
        &cfg.grid.to_spec(),
        cfg.model.to_model(),
    )?;
    let contour_specs = [(0.3935, "white", "39% mass"), (0.8647, "orange", "86% mass"), (0.9889, "red", "99% mass")];
    let contours: Vec<ContourSet> = contour_specs
        .iter()
        .map(|&(mass, color, label)| ContourSet {
            lines: pdf.contours(pdf.level_for_mass(mass)),
            color: color.to_string(),
            label: label.to_string(),
        })
        .collect();
    let svg = render_field_svg(&field_grid, &geometry, &contours, Some(&trailer));
    std::fs::write(out_dir.join("locate.svg"), svg).map_err(nvloc::Error::Io)?;

    let report = json!({
        "kind": "locate",
        "mode": match mode {
            LocalizationMode::Infinite => "infinite",
            LocalizationMode::FiniteLength => "finite_length",
        },
        "alpha": {
            "alpha_z_t_per_a": m.alpha_z,
            "alpha_perp_t_per_a": m.alpha_perp,
            "sigma_alpha_t_per_a": m.sigma_alpha,
        },
        "n": n,
        "seed": seed,
        "point_fit": {
            "x_nm": point.x * 1e9,
            "z_nm": point.z * 1e9,
            "residual_t_per_a": point.residual,
            "mirror": point.mirror.map(|mir| json!({
                "x_nm": mir.x * 1e9,
                "z_nm": mir.z * 1e9,
                "residual_t_per_a": mir.residual,
            })),
        },
        "mean_x_nm": estimate.x * 1e9,
        "std_x_nm": estimate.std_x * 1e9,
        "mean_z_nm": estimate.z * 1e9,
        "std_z_nm": estimate.std_z * 1e9,
        "failure_fraction": boot.failure_fraction(),
        "mirror_flag": point.mirror.is_some(),
        "kde_bandwidth_nm": [pdf.bandwidth.0 * 1e9, pdf.bandwidth.1 * 1e9],
        "delta_like": pdf.delta_like,
        "files": { "samples": "samples.csv", "pdf": "pdf.csv", "svg": "locate.svg" },
        "config_sha256": hash,
    });
    crate::commands::write_json(out_dir, "locate.json", &report)?;

    println!(
        "position: x' = {:.1} +/- {:.1} nm, z' = {:.1} +/- {:.1} nm ({} draws, {:.1}% failed)",
        estimate.x * 1e9,
        estimate.std_x * 1e9,
        estimate.z * 1e9,
        estimate.std_z * 1e9,
        n,
        100.0 * boot.failure_fraction()
    );
    Ok(())
}
