use std::path::Path;

use anyhow::Result;
use clap::{Parser, Subcommand};

use nvloc::fitting::{synth_nutation, synth_odmr, OdmrSynthSettings};
use nvloc::io::{write_nutation_csv, write_odmr_csv};

use crate::config::RunConfig;

#[derive(Subcommand, Debug)]
pub enum Kind {
    /// Four-dip ODMR spectra, one file per drive current.
    Odmr(OdmrArgs),
    /// Nuclear-oscillation traces, one file per drive current.
    Nutation(NutationArgs),
}

#[derive(Parser, Debug)]
pub struct OdmrArgs {
    /// True axial field-to-current ratio, T/A (≡ mT/mA).
    #[arg(long, default_value_t = 1.4)]
    pub alpha_z_t_per_a: f64,
    /// Ambient axial field, µT.
    #[arg(long, default_value_t = 30.0)]
    pub ambient_bz_ut: f64,
    /// Comma-separated drive currents, µA.
    #[arg(long, value_delimiter = ',', default_value = "240,160,-160,-240")]
    pub currents_ua: Vec<f64>,
    /// Gaussian linewidth sigma, MHz.
    #[arg(long, default_value_t = 1.0)]
    pub linewidth_mhz: f64,
    /// Fractional dip contrast per line.
    #[arg(long, default_value_t = 0.03)]
    pub contrast: f64,
    /// Baseline count rate, kcps.
    #[arg(long, default_value_t = 100.0)]
    pub rate_kcps: f64,
    /// Integration time per point, s.
    #[arg(long, default_value_t = 0.1)]
    pub integration_s: f64,
    /// Samples per spectrum.
    #[arg(long, default_value_t = 301)]
    pub points: usize,
    /// Base RNG seed; file k uses seed + k.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Disable photon shot noise.
    #[arg(long)]
    pub noise_free: bool,
}

#[derive(Parser, Debug)]
pub struct NutationArgs {
    /// True transverse field-to-current ratio, T/A.
    #[arg(long, default_value_t = 1.9)]
    pub alpha_perp_t_per_a: f64,
    /// True axial field-to-current ratio, T/A (sets the ω_NO floor).
    #[arg(long, default_value_t = 1.4)]
    pub alpha_z_t_per_a: f64,
    /// Ambient axial field, µT.
    #[arg(long, default_value_t = 30.0)]
    pub ambient_bz_ut: f64,
    /// Comma-separated drive currents, µA.
    #[arg(long, value_delimiter = ',', default_value = "240,160,-120,-240")]
    pub currents_ua: Vec<f64>,
    /// Gaussian contrast noise (1σ).
    #[arg(long, default_value_t = 0.02)]
    pub noise: f64,
    /// Base RNG seed; file k uses seed + k.
    #[arg(long, default_value_t = 2)]
    pub seed: u64,
}

pub fn run(kind: &Kind, cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let constants = cfg.spin.to_constants();
    constants.validate()?;
    match kind {
        Kind::Odmr(args) => {
            let settings = OdmrSynthSettings {
                linewidth: args.linewidth_mhz * 1e6,
                contrast: args.contrast,
                rate: args.rate_kcps * 1e3,
                integration: args.integration_s,
                points: args.points,
                shot_noise: !args.noise_free,
            };
            for (k, &i_ua) in args.currents_ua.iter().enumerate() {
                let current = i_ua * 1e-6;
                let b_z = args.alpha_z_t_per_a * current + args.ambient_bz_ut * 1e-6;
                let spectrum =
                    synth_odmr(&constants, b_z, &settings, current, args.seed + k as u64);
                let name = format!("odmr_{k:03}.csv");
                write_odmr_csv(&out_dir.join(&name), &spectrum, Some(&format!(
                    "config_sha256={}",
                    cfg.sha256()
                )))?;
                std::fs::write(
                    out_dir.join(format!("odmr_{k:03}.json")),
                    format!("{{\"i0_amp\": {current:e}}}\n"),
                )
                .map_err(nvloc::Error::Io)?;
                println!("wrote {name} (i0 = {i_ua} uA, B_z = {:.4} mT)", b_z * 1e3);
            }
        }
        Kind::Nutation(args) => {
            for (k, &i_ua) in args.currents_ua.iter().enumerate() {
                let current = i_ua * 1e-6;
                let b_z = args.alpha_z_t_per_a * current + args.ambient_bz_ut * 1e-6;
                let b_perp = (args.alpha_perp_t_per_a * current).abs();
                let trace = synth_nutation(
                    &constants,
                    b_z,
                    b_perp,
                    args.noise,
                    current,
                    args.seed + k as u64,
                );
                let name = format!("nutation_{k:03}.csv");
                write_nutation_csv(&out_dir.join(&name), &trace, Some(&format!(
                    "config_sha256={}",
                    cfg.sha256()
                )))?;
                std::fs::write(
                    out_dir.join(format!("nutation_{k:03}.json")),
                    format!("{{\"i0_amp\": {current:e}}}\n"),
                )
                .map_err(nvloc::Error::Io)?;
                println!(
                    "wrote {name} (i0 = {i_ua} uA, B_perp = {:.4} mT)",
                    b_perp * 1e3
                );
            }
        }
    }
    Ok(())
}
