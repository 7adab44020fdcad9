//! Rectangular evaluation grids in the lab-frame (x′, z′) plane.

use crate::error::{Error, Result};

/// Inclusive rectangular grid specification, meters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub nz: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.nz == 0 {
            return Err(Error::validation("grid must have at least one point per axis"));
        }
        if !(self.x_min <= self.x_max && self.z_min <= self.z_max) {
            return Err(Error::validation("grid bounds must be ordered"));
        }
        if (self.nx > 1 && self.x_min == self.x_max) || (self.nz > 1 && self.z_min == self.z_max)
        {
            return Err(Error::validation("degenerate grid axis with multiple points"));
        }
        Ok(())
    }

    pub fn x_values(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn z_values(&self) -> Vec<f64> {
        linspace(self.z_min, self.z_max, self.nz)
    }

    pub fn dx(&self) -> f64 {
        if self.nx > 1 {
            (self.x_max - self.x_min) / (self.nx - 1) as f64
        } else {
            0.0
        }
    }

    pub fn dz(&self) -> f64 {
        if self.nz > 1 {
            (self.z_max - self.z_min) / (self.nz - 1) as f64
        } else {
            0.0
        }
    }

    /// Area element for Riemann sums over the grid.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dz()
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|k| lo + step * k as f64).collect()
        }
    }
}

/// Scalar field sampled on a [`GridSpec`], stored row-major in z then x:
/// `values[iz * nx + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::validation(format!(
                "grid values length {} does not match spec {}x{}",
                values.len(),
                spec.nx,
                spec.nz
            )));
        }
        Ok(Grid2D { spec, values })
    }

    pub fn value(&self, ix: usize, iz: usize) -> f64 {
        self.values[iz * self.spec.nx + ix]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Riemann-sum integral over the grid.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec.cell_area()
    }

    /// (x, z, value) triples in storage order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let xs = self.spec.x_values();
        let zs = self.spec.z_values();
        (0..self.spec.nz).flat_map(move |iz| {
            let xs = xs.clone();
            let z = zs[iz];
            (0..self.spec.nx).map(move |ix| {
                (xs[ix], z, self.values[iz * self.spec.nx + ix])
            })
        })
    }
}
