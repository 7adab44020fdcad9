pub mod couple;
pub mod fieldmap;
pub mod fit_nutation;
pub mod fit_odmr;
pub mod locate;
pub mod simulate;

use std::path::Path;

use anyhow::{Context, Result};

/// Reads the `{"i0_amp": ...}` sidecar manifest next to a data file.
pub fn sidecar_current(data_path: &Path) -> Result<Option<f64>> {
    let sidecar = data_path.with_extension("json");
    if !sidecar.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&sidecar)
        .with_context(|| format!("reading sidecar {}", sidecar.display()))?;
    #[derive(serde::Deserialize)]
    struct Manifest {
        i0_amp: f64,
    }
    let m: Manifest = serde_json::from_str(&text)
        .with_context(|| format!("parsing sidecar {}", sidecar.display()))?;
    Ok(Some(m.i0_amp))
}

/// Writes a JSON value into `out_dir/name` and echoes the path.
pub fn write_json(out_dir: &Path, name: &str, value: &serde_json::Value) -> Result<()> {
    let path = out_dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).expect("serializable"))
        .map_err(nvloc::Error::Io)?;
    println!("wrote {}", path.display());
    Ok(())
}
