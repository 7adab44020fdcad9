use std::path::Path;

use anyhow::Result;
use clap::Parser;
use serde_json::json;

use nvloc::coupling::{coupling_with_detection_time, ResonatorParams};

use crate::commands::write_json;
use crate::config::RunConfig;

#[derive(Parser, Debug)]
pub struct Args {
    /// Measured transverse field-to-current ratio, T/A (≡ mT/mA).
    #[arg(long)]
    pub alpha_perp_t_per_a: f64,
    /// Resonator vacuum current fluctuations, nA.
    #[arg(long, default_value_t = 35.0)]
    pub delta_i_na: f64,
    /// Resonator energy damping rate, 1/s.
    #[arg(long, default_value_t = 1e5)]
    pub kappa_per_s: f64,
    /// Spin decoherence rate, 1/s.
    #[arg(long, default_value_t = 1e5)]
    pub gamma2_per_s: f64,
    /// Microwave detection efficiency, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Report file name inside the output directory.
    #[arg(long, default_value = "couple.json")]
    pub report: String,
}

pub fn run(args: &Args, cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let constants = cfg.spin.to_constants();
    constants.validate()?;
    let resonator = ResonatorParams {
        delta_i: args.delta_i_na * 1e-9,
        kappa: args.kappa_per_s,
        gamma2: args.gamma2_per_s,
        eta: args.eta,
    };
    let g = coupling_with_detection_time(args.alpha_perp_t_per_a, &resonator, &constants)?;

    let report = json!({
        "kind": "couple",
        "alpha_perp_t_per_a": args.alpha_perp_t_per_a,
        "resonator": {
            "delta_i_a": resonator.delta_i,
            "kappa_per_s": resonator.kappa,
            "gamma2_per_s": resonator.gamma2,
            "eta": resonator.eta,
        },
        "g_over_2pi_hz": g.g_over_2pi,
        "g_angular_rad_per_s": g.g_angular,
        "detection_time_s": g.detection_time,
        "config_sha256": cfg.sha256(),
    });
    write_json(out_dir, &args.report, &report)?;

    match g.detection_time {
        Some(t) => println!(
            "g/2pi = {:.1} Hz, detection time = {:.3} s",
            g.g_over_2pi, t
        ),
        None => println!("g/2pi = {:.1} Hz (zero coupling, no detection time)", g.g_over_2pi),
    }
    Ok(())
}
