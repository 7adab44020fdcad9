use std::path::Path;

use anyhow::Result;
use clap::Parser;

use nvloc::io::{render_field_svg, write_field_grid_csv};
use nvloc::wire_field::field_magnitude_grid;

use crate::config::RunConfig;

#[derive(Parser, Debug)]
pub struct Args {
    /// DC current through the wire, µA.
    #[arg(long, default_value_t = 1000.0)]
    pub current_ua: f64,
}

pub fn run(args: &Args, cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let geometry = cfg.wire.to_geometry()?;
    let spec = cfg.grid.to_spec();
    let current = args.current_ua * 1e-6;
    let grid = field_magnitude_grid(&geometry, current, &spec, cfg.model.to_model())?;

    let hash = cfg.sha256();
    let trailer = format!("config_sha256={hash}");
    let csv_path = out_dir.join("fieldmap.csv");
    write_field_grid_csv(&csv_path, &grid, Some(&trailer))?;
    let svg = render_field_svg(&grid, &geometry, &[], Some(&trailer));
    let svg_path = out_dir.join("fieldmap.svg");
    std::fs::write(&svg_path, svg).map_err(nvloc::Error::Io)?;

    println!(
        "wrote {} and {} ({} points, {:.3} mA)",
        csv_path.display(),
        svg_path.display(),
        grid.values.len(),
        args.current_ua / 1000.0
    );
    Ok(())
}
