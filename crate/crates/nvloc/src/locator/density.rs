//! Kernel density estimation of the position distribution and
//! iso-probability contour extraction.

use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridSpec};

/// Per-axis kernel bandwidth selection.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Bandwidth {
    /// Silverman's rule per axis: h = σ̂ n^(−1/6) in two dimensions.
    Silverman,
    /// Fixed (h_x, h_z), meters.
    Fixed(f64, f64),
}

/// A contour polyline in (x, z) coordinates; closed when the first and
/// last vertices coincide, otherwise clipped at the grid boundary.
pub type ContourLine = Vec<(f64, f64)>;

/// Gaussian-kernel density estimate on a grid, normalized to unit mass
/// over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionPdf {
    pub grid: Grid2D,
    /// (h_x, h_z), meters.
    pub bandwidth: (f64, f64),
    /// Set when the samples had (near-)zero variance and the density is a
    /// kernel spike.
    pub delta_like: bool,
}

impl PositionPdf {
    /// Density threshold enclosing the requested probability mass.
    pub fn level_for_mass(&self, mass: f64) -> f64 {
        mass_level(&self.grid, mass)
    }

    /// Iso-density contours at `level`.
    pub fn contours(&self, level: f64) -> Vec<ContourLine> {
        marching_squares(&self.grid, level)
    }
}

/// 2D product-Gaussian KDE over `samples`, normalized on the grid.
pub fn position_pdf(
    samples: &[(f64, f64)],
    spec: &GridSpec,
    bandwidth: Bandwidth,
) -> Result<PositionPdf> {
    if samples.len() < 100 {
        return Err(Error::InsufficientData(format!(
            "density estimate needs >= 100 samples, got {}",
            samples.len()
        )));
    }
    spec.validate()?;
    if spec.nx < 2 || spec.nz < 2 {
        return Err(Error::validation("density grid needs at least 2x2 points"));
    }

    let n = samples.len() as f64;
    let std = |sel: fn(&(f64, f64)) -> f64| -> f64 {
        let mean = samples.iter().map(sel).sum::<f64>() / n;
        (samples.iter().map(|s| (sel(s) - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };

    let (mut hx, mut hz, mut delta_like) = match bandwidth {
        Bandwidth::Fixed(hx, hz) => {
            if !(hx > 0.0 && hz > 0.0) {
                return Err(Error::validation("bandwidths must be positive"));
            }
            (hx, hz, false)
        }
        Bandwidth::Silverman => {
            let factor = n.powf(-1.0 / 6.0);
            (std(|s| s.0) * factor, std(|s| s.1) * factor, false)
        }
    };
    // Degenerate sample clouds collapse the bandwidth; fall back to one
    // grid cell and flag the spike.
    if !(hx > 0.0) {
        hx = spec.dx().max(f64::MIN_POSITIVE);
        delta_like = true;
    }
    if !(hz > 0.0) {
        hz = spec.dz().max(f64::MIN_POSITIVE);
        delta_like = true;
    }

    let xs = spec.x_values();
    let zs = spec.z_values();
    let values: Vec<f64> = crate::par::map_indexed(spec.len(), |idx| {
        let x = xs[idx % spec.nx];
        let z = zs[idx / spec.nx];
        samples
            .iter()
            .map(|&(sx, sz)| {
                let tx = (x - sx) / hx;
                let tz = (z - sz) / hz;
                (-0.5 * (tx * tx + tz * tz)).exp()
            })
            .sum::<f64>()
    });

    let cell = spec.cell_area();
    let total: f64 = values.iter().sum::<f64>() * cell;
    if !(total > 0.0) {
        return Err(Error::validation(
            "all samples fall outside the density grid",
        ));
    }
    let values: Vec<f64> = values.iter().map(|v| v / total).collect();

    Ok(PositionPdf {
        grid: Grid2D::new(*spec, values)?,
        bandwidth: (hx, hz),
        delta_like,
    })
}

/// Density threshold such that cells at or above it hold `mass` of the
/// total probability (by descending-density accumulation).
pub fn mass_level(grid: &Grid2D, mass: f64) -> f64 {
    let cell = grid.spec.cell_area();
    let mut densities: Vec<f64> = grid.values.clone();
    densities.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let total: f64 = densities.iter().sum::<f64>() * cell;
    let target = mass.clamp(0.0, 1.0) * total;
    let mut acc = 0.0;
    for &d in &densities {
        acc += d * cell;
        if acc >= target {
            return d;
        }
    }
    *densities.last().unwrap_or(&0.0)
}

/// Marching squares: iso-level segments joined into polylines.
pub fn marching_squares(grid: &Grid2D, level: f64) -> Vec<ContourLine> {
    let xs = grid.spec.x_values();
    let zs = grid.spec.z_values();
    let nx = grid.spec.nx;
    let nz = grid.spec.nz;
    let mut segments: Vec<((f64, f64), (f64, f64))> = Vec::new();

    let interp = |pa: (f64, f64), va: f64, pb: (f64, f64), vb: f64| -> (f64, f64) {
        let t = if (vb - va).abs() > 0.0 {
            ((level - va) / (vb - va)).clamp(0.0, 1.0)
        } else {
            0.5
        };
        (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
    };

    for iz in 0..nz.saturating_sub(1) {
        for ix in 0..nx.saturating_sub(1) {
            let corners = [
                ((xs[ix], zs[iz]), grid.value(ix, iz)),
                ((xs[ix + 1], zs[iz]), grid.value(ix + 1, iz)),
                ((xs[ix + 1], zs[iz + 1]), grid.value(ix + 1, iz + 1)),
                ((xs[ix], zs[iz + 1]), grid.value(ix, iz + 1)),
            ];
            let mut case = 0usize;
            for (k, &(_, v)) in corners.iter().enumerate() {
                if v >= level {
                    case |= 1 << k;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            // Edge points between corner pairs (0-1, 1-2, 2-3, 3-0).
            let edge = |a: usize, b: usize| interp(corners[a].0, corners[a].1, corners[b].0, corners[b].1);
            let mut push = |a: (usize, usize), b: (usize, usize)| {
                segments.push((edge(a.0, a.1), edge(b.0, b.1)));
            };
            match case {
                1 => push((0, 1), (0, 3)),
                2 => push((1, 0), (1, 2)),
                3 => push((1, 2), (0, 3)),
                4 => push((2, 1), (2, 3)),
                5 => {
                    // saddle: resolve by the cell-center average
                    let center = 0.25 * corners.iter().map(|&(_, v)| v).sum::<f64>();
                    if center >= level {
                        push((0, 1), (2, 1));
                        push((2, 3), (0, 3));
                    } else {
                        push((0, 1), (0, 3));
                        push((2, 1), (2, 3));
                    }
                }
                6 => push((1, 0), (2, 3)),
                7 => push((2, 3), (0, 3)),
                8 => push((3, 0), (3, 2)),
                9 => push((0, 1), (3, 2)),
                10 => {
                    let center = 0.25 * corners.iter().map(|&(_, v)| v).sum::<f64>();
                    if center >= level {
                        push((0, 1), (0, 3));
                        push((1, 2), (2, 3));
                    } else {
                        push((0, 1), (1, 2));
                        push((2, 3), (0, 3));
                    }
                }
                11 => push((1, 2), (3, 2)),
                12 => push((3, 0), (2, 1)),
                13 => push((0, 1), (2, 1)),
                14 => push((1, 0), (3, 0)),
                _ => unreachable!(),
            }
        }
    }

    chain_segments(segments)
}

/// Joins segments that share endpoints into polylines.
fn chain_segments(mut segments: Vec<((f64, f64), (f64, f64))>) -> Vec<ContourLine> {
    let close = |a: (f64, f64), b: (f64, f64)| -> bool {
        let scale = (a.0.abs() + a.1.abs() + b.0.abs() + b.1.abs()).max(1e-300);
        ((a.0 - b.0).abs() + (a.1 - b.1).abs()) < 1e-9 * scale
    };
    // Zero-length artifacts appear when the level passes exactly through
    // a grid node.
    segments.retain(|&(a, b)| !close(a, b));
    let mut lines = Vec::new();
    while let Some((start, end)) = segments.pop() {
        let mut line = vec![start, end];
        loop {
            let head = *line.last().unwrap();
            if let Some(pos) = segments
                .iter()
                .position(|&(a, b)| close(a, head) || close(b, head))
            {
                let (a, b) = segments.swap_remove(pos);
                line.push(if close(a, head) { b } else { a });
            } else {
                break;
            }
        }
        loop {
            let tail = line[0];
            if let Some(pos) = segments
                .iter()
                .position(|&(a, b)| close(a, tail) || close(b, tail))
            {
                let (a, b) = segments.swap_remove(pos);
                line.insert(0, if close(a, tail) { b } else { a });
            } else {
                break;
            }
        }
        lines.push(line);
    }
    lines
}
