//! `nvloc`: simulate, fit, locate and couple — the full pipeline from
//! spectra to NV-position and coupling estimates.
//!
//! Units at the boundary are human-scale and carried in the flag names
//! (nm, µA, mT, MHz; field-to-current ratios in T/A ≡ mT/mA). Exit
//! codes: 0 success, 1 fit failure, 2 I/O error, 3 inversion
//! instability, 4 validation error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "nvloc",
    about = "NV-center localization relative to a nanowire: field maps, spectrum fits, position inversion, coupling estimates",
    version
)]
struct Cli {
    /// JSON run configuration; omitted fields take the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "nvloc_out")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render the |B| map of the wire at a DC current (CSV + SVG).
    Fieldmap(commands::fieldmap::Args),
    /// Generate synthetic ODMR spectra or nutation traces.
    #[command(subcommand)]
    Simulate(commands::simulate::Kind),
    /// Fit ODMR spectra: four Gaussians per file, B_z per current, α_z.
    FitOdmr(commands::fit_odmr::Args),
    /// Fit nutation traces: sinusoid per file, B_⊥ per current, α_⊥.
    FitNutation(commands::fit_nutation::Args),
    /// Bootstrap the NV position from measured (α_z, α_⊥).
    Locate(commands::locate::Args),
    /// Spin–resonator coupling constant and detection time from α_⊥.
    Couple(commands::couple::Args),
}

/// Some per-file fits failed but the report (with partial results) was
/// written; maps to the fit-failure exit code.
#[derive(Debug)]
pub struct PartialFitFailure {
    pub failures: usize,
}

impl std::fmt::Display for PartialFitFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} file(s) failed to fit; partial report retained",
            self.failures
        )
    }
}

impl std::error::Error for PartialFitFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use nvloc::Error::*;
    if err.downcast_ref::<PartialFitFailure>().is_some() {
        return 1;
    }
    if let Some(e) = err.downcast_ref::<nvloc::Error>() {
        return match e {
            UnderResolved { .. }
            | FitDidNotConverge { .. }
            | NoOscillation { .. }
            | AmbiguousBranches { .. } => 1,
            Io(_) | Parse { .. } => 2,
            UnstableInversion { .. } | NoConsistentPosition { .. } | OutOfRange(_) => 3,
            Validation(_)
            | InconsistentInputs(_)
            | InsufficientData(_)
            | SingularPoint
            | QuadratureFailed { .. } => 4,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    if err.downcast_ref::<serde_json::Error>().is_some() {
        return 4;
    }
    // anyhow contexts wrapping config/file problems
    let text = format!("{err:#}");
    if text.contains("reading") || text.contains("writing") {
        2
    } else {
        4
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> anyhow::Result<()> {
        let cfg = RunConfig::load(cli.config.as_deref())?;
        std::fs::create_dir_all(&cli.out_dir).map_err(nvloc::Error::Io)?;
        cfg.emit(&cli.out_dir)?;
        match &cli.command {
            Command::Fieldmap(args) => commands::fieldmap::run(args, &cfg, &cli.out_dir),
            Command::Simulate(kind) => commands::simulate::run(kind, &cfg, &cli.out_dir),
            Command::FitOdmr(args) => commands::fit_odmr::run(args, &cfg, &cli.out_dir),
            Command::FitNutation(args) => commands::fit_nutation::run(args, &cfg, &cli.out_dir),
            Command::Locate(args) => commands::locate::run(args, &cfg, &cli.out_dir),
            Command::Couple(args) => commands::couple::run(args, &cfg, &cli.out_dir),
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
