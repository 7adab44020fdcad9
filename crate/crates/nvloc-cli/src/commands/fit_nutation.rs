use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::json;

use nvloc::fitting::{bperp_from_omega, extract_alpha_perp, fit_sinusoid, AlphaPerpModel};
use nvloc::io::read_nutation_csv;

use crate::commands::{sidecar_current, write_json};
use crate::config::RunConfig;

#[derive(Parser, Debug)]
pub struct Args {
    /// Nutation CSV files (`delay_s,contrast`); the drive current comes
    /// from a `current_amp` column or a `<file>.json` sidecar.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// `fit-odmr` report supplying B_z(i₀) = α_z i₀ + intercept for the
    /// axial term of ω_NO. Without it B_z is taken as zero (sub-percent
    /// effect at these fields, flagged in the report).
    #[arg(long)]
    pub odmr_fit: Option<PathBuf>,
    /// Fit |a·i₀ + b| over signed currents instead of a line over |i₀|.
    #[arg(long)]
    pub signed_line: bool,
    /// Report file name inside the output directory.
    #[arg(long, default_value = "nutation_fit.json")]
    pub report: String,
}

fn bz_line_from_report(path: &Path) -> Result<(f64, f64)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading odmr fit {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing odmr fit {}", path.display()))?;
    let fit = &value["line_fit"];
    let slope = fit["alpha_z_t_per_a"]
        .as_f64()
        .context("odmr fit report lacks alpha_z_t_per_a")?;
    let intercept = fit["intercept_t"].as_f64().unwrap_or(0.0);
    Ok((slope, intercept))
}

pub fn run(args: &Args, cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let constants = cfg.spin.to_constants();
    constants.validate()?;
    let bz_line = args.odmr_fit.as_deref().map(bz_line_from_report).transpose()?;

    let mut reports = Vec::new();
    let mut series: Vec<(f64, f64)> = Vec::new();
    let mut failures = 0usize;
    for file in &args.files {
        let current = sidecar_current(file)?;
        let trace = read_nutation_csv(file, current)?;
        let b_z = bz_line
            .map(|(a, b)| a * trace.current + b)
            .unwrap_or(0.0);
        let entry = fit_sinusoid(&trace)
            .and_then(|fit| bperp_from_omega(fit.frequency, b_z, &constants).map(|b| (fit, b)));
        match entry {
            Ok((fit, b_perp)) => {
                series.push((trace.current, b_perp));
                reports.push(json!({
                    "file": file.display().to_string(),
                    "status": "ok",
                    "current_a": trace.current,
                    "frequency_hz": fit.frequency,
                    "frequency_stderr_hz": fit.frequency_stderr,
                    "amplitude": fit.amplitude,
                    "offset": fit.offset,
                    "phase_rad": fit.phase,
                    "assumed_b_z_t": b_z,
                    "b_perp_t": b_perp,
                    "residual_norm": fit.residual_norm,
                }));
            }
            Err(e) => {
                failures += 1;
                reports.push(json!({
                    "file": file.display().to_string(),
                    "status": "failed",
                    "current_a": trace.current,
                    "error": e.to_string(),
                }));
            }
        }
    }

    let model = if args.signed_line {
        AlphaPerpModel::SignedLine
    } else {
        AlphaPerpModel::PlainAbsCurrent
    };
    let fit = extract_alpha_perp(&series, model);
    let line_fit = match &fit {
        Ok(f) => json!({
            "alpha_perp_t_per_a": f.slope,
            "alpha_perp_stderr_t_per_a": f.slope_stderr,
            "intercept_t": f.intercept,
            "intercept_stderr_t": f.intercept_stderr,
            "residual_norm_t": f.residual_norm,
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let report = json!({
        "kind": "nutation_alpha_perp",
        "model": match model {
            AlphaPerpModel::PlainAbsCurrent => "plain_abs_current",
            AlphaPerpModel::SignedLine => "signed_line",
        },
        "b_z_source": match bz_line {
            Some((a, b)) => json!({ "alpha_z_t_per_a": a, "intercept_t": b }),
            None => json!("assumed_zero"),
        },
        "n_files": args.files.len(),
        "n_used": series.len(),
        "n_failed": failures,
        "line_fit": line_fit,
        "traces": reports,
        "config_sha256": cfg.sha256(),
    });
    write_json(out_dir, &args.report, &report)?;

    let fit = fit?;
    println!(
        "alpha_perp = {:.4} +/- {:.4} T/A ({} traces used, {} failed)",
        fit.slope,
        fit.slope_stderr,
        series.len(),
        failures
    );
    if failures > 0 {
        return Err(crate::PartialFitFailure { failures }.into());
    }
    Ok(())
}
