//! Run configuration: JSON file with flag overrides, human-scale units
//! at the boundary (nm, µA, MHz, mT), SI inside the library.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use nvloc::grid::GridSpec;
use nvloc::locator::GeometryPrior;
use nvloc::spin_model::SpinConstants;
use nvloc::wire_field::{NvAxis, WireGeometry, WireModel};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinConfig {
    pub d_mhz: f64,
    pub gamma_e_mhz_per_t: f64,
    pub gamma_i_mhz_per_t: f64,
    pub a_z_mhz: f64,
    pub a_perp_mhz: f64,
    pub gamma_i_perp_mhz_per_t: f64,
}

impl Default for SpinConfig {
    fn default() -> Self {
        SpinConfig {
            d_mhz: 2870.0,
            gamma_e_mhz_per_t: 28_000.0,
            gamma_i_mhz_per_t: -4.3,
            a_z_mhz: 3.03,
            a_perp_mhz: 3.65,
            gamma_i_perp_mhz_per_t: 75.0,
        }
    }
}

impl SpinConfig {
    pub fn to_constants(&self) -> SpinConstants {
        SpinConstants {
            d: self.d_mhz * 1e6,
            gamma_e: self.gamma_e_mhz_per_t * 1e6,
            gamma_i: self.gamma_i_mhz_per_t * 1e6,
            a_z: self.a_z_mhz * 1e6,
            a_perp: self.a_perp_mhz * 1e6,
            gamma_i_perp: self.gamma_i_perp_mhz_per_t * 1e6,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WireConfig {
    pub width_nm: f64,
    pub thickness_nm: f64,
    pub length_nm: f64,
}

impl Default for WireConfig {
    fn default() -> Self {
        WireConfig {
            width_nm: 36.0,
            thickness_nm: 20.0,
            length_nm: 500.0,
        }
    }
}

impl WireConfig {
    pub fn to_geometry(&self) -> nvloc::Result<WireGeometry> {
        WireGeometry::new(
            self.width_nm * 1e-9,
            self.thickness_nm * 1e-9,
            self.length_nm * 1e-9,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AxisConfig {
    pub nv_direction: [f64; 3],
    pub wire_direction: [f64; 3],
    pub surface_normal: [f64; 3],
}

impl Default for AxisConfig {
    fn default() -> Self {
        AxisConfig {
            nv_direction: [1.0, 1.0, 1.0],
            wire_direction: [1.0, 1.0, 0.0],
            surface_normal: [0.0, 0.0, 1.0],
        }
    }
}

impl AxisConfig {
    pub fn to_axis(&self) -> nvloc::Result<NvAxis> {
        NvAxis::from_crystal_directions(self.nv_direction, self.wire_direction, self.surface_normal)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorConfig {
    pub width_sigma_nm: f64,
    pub thickness_sigma_nm: f64,
    pub rel_err_perp: f64,
    pub rel_err_z: f64,
}

impl Default for PriorConfig {
    fn default() -> Self {
        PriorConfig {
            width_sigma_nm: 5.0,
            thickness_sigma_nm: 2.0,
            rel_err_perp: 0.011,
            rel_err_z: 0.037,
        }
    }
}

impl PriorConfig {
    pub fn to_prior(&self, wire: &WireConfig) -> GeometryPrior {
        GeometryPrior {
            w_mean: wire.width_nm * 1e-9,
            w_sigma: self.width_sigma_nm * 1e-9,
            t_mean: wire.thickness_nm * 1e-9,
            t_sigma: self.thickness_sigma_nm * 1e-9,
            rel_perp: self.rel_err_perp,
            rel_z: self.rel_err_z,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapConfig {
    pub n: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig { n: 5000, seed: 1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub x_min_nm: f64,
    pub x_max_nm: f64,
    pub nx: usize,
    pub z_min_nm: f64,
    pub z_max_nm: f64,
    pub nz: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            x_min_nm: -250.0,
            x_max_nm: 250.0,
            nx: 126,
            z_min_nm: -100.0,
            z_max_nm: 40.0,
            nz: 71,
        }
    }
}

impl GridConfig {
    pub fn to_spec(&self) -> GridSpec {
        GridSpec {
            x_min: self.x_min_nm * 1e-9,
            x_max: self.x_max_nm * 1e-9,
            nx: self.nx,
            z_min: self.z_min_nm * 1e-9,
            z_max: self.z_max_nm * 1e-9,
            nz: self.nz,
        }
    }
}

/// The resolved run configuration. Every omitted field takes the
/// documented default; every run writes the resolved copy next to its
/// outputs for provenance.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub spin: SpinConfig,
    pub wire: WireConfig,
    pub nv_axis: AxisConfig,
    pub prior: PriorConfig,
    pub bootstrap: BootstrapConfig,
    pub grid: GridConfig,
    pub model: ModelConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelConfig {
    #[default]
    Infinite,
    Finite,
}

impl ModelConfig {
    pub fn to_model(self) -> WireModel {
        match self {
            ModelConfig::Infinite => WireModel::Infinite,
            ModelConfig::Finite => WireModel::Finite,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<RunConfig> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", p.display()))
            }
        }
    }

    /// SHA-256 of the canonical JSON serialization, for embedding in
    /// outputs.
    pub fn sha256(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        format!("{:x}", hasher.finalize())
    }

    /// Writes the resolved config into the output directory.
    pub fn emit(&self, out_dir: &Path) -> Result<()> {
        let pretty = serde_json::to_string_pretty(self).expect("config serializes");
        std::fs::write(out_dir.join("resolved_config.json"), pretty)
            .with_context(|| format!("writing resolved config to {}", out_dir.display()))?;
        Ok(())
    }
}
