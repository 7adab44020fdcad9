//! Position fitting and bootstrap uncertainty.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::par;
use crate::wire_field::{
    alpha_map_with_tol, project_to_nv_frame, AlphaPair, LabPoint, LabVector, NvAxis, WireGeometry,
    WireModel, MU_0,
};

/// Search domain of the position fit (hard depth bound from the
/// implantation energy, configurable at the call site only by clamping
/// the measurement into range).
pub const SEARCH_X_MAX_M: f64 = 300e-9;
pub const SEARCH_Z_MIN_M: f64 = -100e-9;
pub const SEARCH_Z_MAX_M: f64 = -1e-9;

const COARSE_PITCH_M: f64 = 2e-9;
const REFINE_PITCH_M: f64 = 0.01e-9;

/// Measured field-to-current ratios with their shared Gaussian
/// uncertainty (the reported 2·10⁻² mT/mA equals 0.02 T/A).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AlphaMeasurement {
    /// T/A, signed.
    pub alpha_z: f64,
    /// T/A, ≥ 0.
    pub alpha_perp: f64,
    /// T/A, shared 1σ uncertainty of both ratios.
    pub sigma_alpha: f64,
}

impl AlphaMeasurement {
    pub fn new(alpha_z: f64, alpha_perp: f64) -> Self {
        AlphaMeasurement {
            alpha_z,
            alpha_perp,
            sigma_alpha: 2e-2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_alpha > 0.0) {
            return Err(Error::validation("sigma_alpha must be positive"));
        }
        if !(self.alpha_z.is_finite() && self.alpha_perp.is_finite()) {
            return Err(Error::validation("alpha values must be finite"));
        }
        Ok(())
    }
}

/// Gaussian priors on the wire cross-section and the relative field
/// errors of finite-length mode.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeometryPrior {
    pub w_mean: f64,
    pub w_sigma: f64,
    pub t_mean: f64,
    pub t_sigma: f64,
    /// Relative field error on α_⊥ in finite-length mode.
    pub rel_perp: f64,
    /// Relative field error on α_z in finite-length mode.
    pub rel_z: f64,
}

impl Default for GeometryPrior {
    fn default() -> Self {
        GeometryPrior {
            w_mean: 36e-9,
            w_sigma: 5e-9,
            t_mean: 20e-9,
            t_sigma: 2e-9,
            rel_perp: 0.011,
            rel_z: 0.037,
        }
    }
}

impl GeometryPrior {
    pub fn validate(&self) -> Result<()> {
        if !(self.w_mean > 0.0 && self.t_mean > 0.0) {
            return Err(Error::validation("prior means must be positive"));
        }
        if self.w_sigma < 0.0 || self.t_sigma < 0.0 || self.rel_perp < 0.0 || self.rel_z < 0.0 {
            return Err(Error::validation("prior sigmas must be non-negative"));
        }
        Ok(())
    }
}

/// Which uncertainty model the bootstrap applies.
///
/// The paper's finite-length analysis keeps the infinite-wire forward
/// model and adds relative field errors from the finite-length deviation;
/// `FiniteLength` reproduces that procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalizationMode {
    Infinite,
    FiniteLength,
}

/// Half-plane preference when the two mirror minima are indistinguishable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfPlane {
    /// Pick from the sign of the measured α_z (positive α_z means x′ < 0
    /// for current along +y′).
    #[default]
    Auto,
    NegativeX,
    PositiveX,
}

/// The rejected mirror-image minimum, reported when it is competitive.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MirrorSolution {
    pub x: f64,
    pub z: f64,
    pub residual: f64,
}

/// Result of a point fit.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PositionFit {
    /// Meters.
    pub x: f64,
    /// Meters, ≤ −1 nm.
    pub z: f64,
    /// √(Δα_z² + Δα_⊥²) at the minimizer, T/A.
    pub residual: f64,
    /// Set when the opposite half-plane fits almost as well.
    pub mirror: Option<MirrorSolution>,
}

/// Closed-form field of the infinite rectangular conductor (per ampere),
/// from the exact antiderivative of the thin-wire kernel. Used to scan
/// the coarse search grid quickly; the quadrature model does the final
/// refinement and is cross-checked against this form in the tests.
pub(crate) fn rect_infinite_closed_form(g: &WireGeometry, p: LabPoint) -> LabVector {
    // P_v(u, v) = v·atan(u/v) + (u/2)·ln(u² + v²); ∂²P_v/∂u∂v = v/(u²+v²)
    fn p_v(u: f64, v: f64) -> f64 {
        let r2 = u * u + v * v;
        let a = if v != 0.0 { v * (u / v).atan() } else { 0.0 };
        let b = if r2 > 0.0 { 0.5 * u * r2.ln() } else { 0.0 };
        a + b
    }
    let dd = |f: &dyn Fn(f64, f64) -> f64, ua: f64, ub: f64, va: f64, vb: f64| {
        f(ua, va) - f(ub, va) - f(ua, vb) + f(ub, vb)
    };
    let (xa, xb) = (-0.5 * g.width, 0.5 * g.width);
    let (za, zb) = (0.0, g.thickness);
    let ua = p.x - xa;
    let ub = p.x - xb;
    let va = p.z - za;
    let vb = p.z - zb;
    let scale = MU_0 / (2.0 * std::f64::consts::PI * g.width * g.thickness);
    let bx = scale * dd(&p_v, ua, ub, va, vb);
    // B_z kernel is −u/(u²+v²); swap the roles of u and v in the primitive.
    let bz = -scale * dd(&|u, v| p_v(v, u), ua, ub, va, vb);
    LabVector {
        x: bx,
        y: 0.0,
        z: bz,
    }
}

fn alpha_closed_form(g: &WireGeometry, axis: &NvAxis, x: f64, z: f64) -> AlphaPair {
    let b = rect_infinite_closed_form(g, LabPoint::midplane(x, z));
    let (alpha_z, alpha_perp) = project_to_nv_frame(&b, axis);
    AlphaPair {
        alpha_z,
        alpha_perp,
    }
}

fn objective(a: &AlphaPair, m: &AlphaMeasurement) -> f64 {
    let dz = a.alpha_z - m.alpha_z;
    let dp = a.alpha_perp - m.alpha_perp;
    dz * dz + dp * dp
}

/// Compass pattern search on the quadrature model down to sub-pitch
/// steps, followed by a Gauss–Newton polish of the two-residual system
/// (the compass stage finds the basin; the polish beats the tilted
/// narrow valley that pure pattern moves stall in). Clamped to the
/// search domain and one half-plane.
fn refine(
    m: &AlphaMeasurement,
    g: &WireGeometry,
    axis: &NvAxis,
    model: WireModel,
    start: (f64, f64),
    x_range: (f64, f64),
) -> Result<(f64, f64, f64)> {
    let alpha = |x: f64, z: f64| -> Result<AlphaPair> {
        alpha_map_with_tol(g, LabPoint::midplane(x, z), axis, model, 1e-7)
    };
    let eval = |x: f64, z: f64| -> Result<f64> { Ok(objective(&alpha(x, z)?, m)) };
    let clamp = |x: f64, z: f64| {
        (
            x.clamp(x_range.0, x_range.1),
            z.clamp(SEARCH_Z_MIN_M, SEARCH_Z_MAX_M),
        )
    };
    let (mut x, mut z) = clamp(start.0, start.1);
    let mut best = eval(x, z)?;
    let mut step = COARSE_PITCH_M;
    while step > 2.0 * REFINE_PITCH_M {
        let mut improved = false;
        for (dx, dz) in [
            (step, 0.0),
            (-step, 0.0),
            (0.0, step),
            (0.0, -step),
            (step, step),
            (step, -step),
            (-step, step),
            (-step, -step),
        ] {
            let (cx, cz) = clamp(x + dx, z + dz);
            if (cx, cz) == (x, z) {
                continue;
            }
            let v = eval(cx, cz)?;
            if v < best {
                best = v;
                x = cx;
                z = cz;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    // Gauss-Newton polish with central-difference Jacobian.
    let h = 0.05e-9;
    for _ in 0..12 {
        let a0 = alpha(x, z)?;
        let rz = a0.alpha_z - m.alpha_z;
        let rp = a0.alpha_perp - m.alpha_perp;
        best = rz * rz + rp * rp;
        if best < 1e-24 {
            break;
        }
        let ax = alpha(x + h, z)?;
        let bx = alpha(x - h, z)?;
        let az = alpha(x, z + h)?;
        let bz = alpha(x, z - h)?;
        let j = [
            [
                (ax.alpha_z - bx.alpha_z) / (2.0 * h),
                (az.alpha_z - bz.alpha_z) / (2.0 * h),
            ],
            [
                (ax.alpha_perp - bx.alpha_perp) / (2.0 * h),
                (az.alpha_perp - bz.alpha_perp) / (2.0 * h),
            ],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-30 {
            break;
        }
        let dx = (-rz * j[1][1] + rp * j[0][1]) / det;
        let dz = (-rp * j[0][0] + rz * j[1][0]) / det;
        // Backtrack if the full step overshoots (boundary or curvature).
        let mut accepted = false;
        let mut scale = 1.0;
        for _ in 0..4 {
            let (cx, cz) = clamp(x + scale * dx, z + scale * dz);
            let v = eval(cx, cz)?;
            if v < best {
                x = cx;
                z = cz;
                best = v;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
        if dx.abs().max(dz.abs()) * scale < 0.1 * REFINE_PITCH_M {
            break;
        }
    }
    Ok((x, z, best.sqrt()))
}

/// Finds the position whose forward-model ratios best match the
/// measurement: closed-form scan of the 2 nm coarse grid over both
/// half-planes, then quadrature pattern-search refinement to 0.01 nm.
///
/// When the two half-plane minima agree within the noise scale, the one
/// matching the α_z sign convention is returned and the other reported
/// as a mirror solution.
pub fn fit_position(
    m: &AlphaMeasurement,
    g: &WireGeometry,
    axis: &NvAxis,
    model: WireModel,
    half_plane: HalfPlane,
) -> Result<PositionFit> {
    m.validate()?;
    g.validate()?;
    if !(m.alpha_perp > 0.0) {
        return Err(Error::validation(
            "alpha_perp must be positive: the transverse component never vanishes below the surface",
        ));
    }

    // Coarse scan (closed-form infinite model): z levels −100..−2 nm at
    // 2 nm pitch plus the −1 nm boundary row.
    let nx = (2.0 * SEARCH_X_MAX_M / COARSE_PITCH_M).round() as usize + 1;
    let mut z_levels: Vec<f64> = (0..50).map(|k| SEARCH_Z_MIN_M + COARSE_PITCH_M * k as f64).collect();
    z_levels.push(SEARCH_Z_MAX_M);

    let mut best_neg: Option<(f64, f64, f64)> = None;
    let mut best_pos: Option<(f64, f64, f64)> = None;
    let mut max_perp = 0.0f64;
    let mut max_abs_z = 0.0f64;
    for &z in &z_levels {
        for ix in 0..nx {
            let x = -SEARCH_X_MAX_M + COARSE_PITCH_M * ix as f64;
            let a = alpha_closed_form(g, axis, x, z);
            max_perp = max_perp.max(a.alpha_perp);
            max_abs_z = max_abs_z.max(a.alpha_z.abs());
            let v = objective(&a, m);
            let slot = if x < 0.0 { &mut best_neg } else { &mut best_pos };
            if slot.is_none() || v < slot.unwrap().2 {
                *slot = Some((x, z, v));
            }
        }
    }
    // Measurements beyond anything the grid can produce cannot be
    // localized inside the search domain (small margin for the
    // closed-form vs quadrature difference at the boundary).
    if m.alpha_perp > 1.001 * max_perp || m.alpha_z.abs() > 1.001 * max_abs_z {
        return Err(Error::OutOfRange(format!(
            "measured (alpha_z {:.3}, alpha_perp {:.3}) T/A exceeds grid maxima ({:.3}, {:.3}) T/A",
            m.alpha_z, m.alpha_perp, max_abs_z, max_perp
        )));
    }

    let refined_neg = refine(
        m,
        g,
        axis,
        model,
        (best_neg.unwrap().0, best_neg.unwrap().1),
        (-SEARCH_X_MAX_M, 0.0),
    )?;
    let refined_pos = refine(
        m,
        g,
        axis,
        model,
        (best_pos.unwrap().0, best_pos.unwrap().1),
        (0.0, SEARCH_X_MAX_M),
    )?;

    let noise_scale = m.sigma_alpha;
    // 5σ on the two-component residual, floored by the numerical residual
    // of the search itself (refinement pitch times the local gradient).
    let threshold = 5.0 * std::f64::consts::SQRT_2 * m.sigma_alpha + 1e-3;

    let (lo, hi) = if refined_neg.2 <= refined_pos.2 {
        (refined_neg, refined_pos)
    } else {
        (refined_pos, refined_neg)
    };

    let prefer_negative = match half_plane {
        HalfPlane::Auto => m.alpha_z >= 0.0,
        HalfPlane::NegativeX => true,
        HalfPlane::PositiveX => false,
    };
    let ambiguous = (hi.2 - lo.2).abs() < noise_scale;
    let (winner, loser) = if ambiguous {
        if prefer_negative {
            (refined_neg, refined_pos)
        } else {
            (refined_pos, refined_neg)
        }
    } else {
        (lo, hi)
    };

    if winner.2 > threshold {
        return Err(Error::NoConsistentPosition {
            residual: winner.2,
            threshold,
        });
    }

    Ok(PositionFit {
        x: winner.0,
        z: winner.1,
        residual: winner.2,
        mirror: ambiguous.then_some(MirrorSolution {
            x: loser.0,
            z: loser.1,
            residual: loser.2,
        }),
    })
}

/// Bootstrap samples with the bookkeeping the exclusion policy needs.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BootstrapSamples {
    /// Fitted (x, z) per successful draw, meters.
    pub samples: Vec<(f64, f64)>,
    pub requested: usize,
    pub failures: usize,
}

impl BootstrapSamples {
    pub fn failure_fraction(&self) -> f64 {
        self.failures as f64 / self.requested as f64
    }
}

/// One bootstrap draw. Draw `k` consumes the ChaCha stream derived from
/// (`seed`, `k`) in the fixed order w, t, α_z, α_⊥, then the two field
/// errors in finite-length mode, so results are independent of execution
/// order and thread count.
pub fn bootstrap_draw(
    m: &AlphaMeasurement,
    prior: &GeometryPrior,
    axis: &NvAxis,
    mode: LocalizationMode,
    length: f64,
    seed: u64,
    k: u64,
) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let gauss = Normal::new(0.0, 1.0).expect("unit normal");
    let mut positive = |mean: f64, sigma: f64| -> f64 {
        for _ in 0..64 {
            let v = mean + sigma * gauss.sample(&mut rng);
            if v > 0.0 {
                return v;
            }
        }
        mean
    };
    let w = positive(prior.w_mean, prior.w_sigma);
    let t = positive(prior.t_mean, prior.t_sigma);
    let mut alpha_z = m.alpha_z + m.sigma_alpha * gauss.sample(&mut rng);
    let mut alpha_perp = m.alpha_perp + m.sigma_alpha * gauss.sample(&mut rng);
    if mode == LocalizationMode::FiniteLength {
        alpha_z *= 1.0 + prior.rel_z * gauss.sample(&mut rng);
        alpha_perp *= 1.0 + prior.rel_perp * gauss.sample(&mut rng);
    }
    let g = WireGeometry {
        width: w,
        thickness: t,
        length,
    };
    let draw = AlphaMeasurement {
        alpha_z,
        alpha_perp,
        sigma_alpha: m.sigma_alpha,
    };
    fit_position(&draw, &g, axis, WireModel::Infinite, HalfPlane::Auto).map(|f| (f.x, f.z))
}

/// Repeats the position fit under Gaussian-perturbed geometry and
/// measured ratios (the paper's 5000-draw procedure). Failed draws are
/// excluded and reported; more than 10% failures aborts as unstable.
pub fn bootstrap_positions(
    m: &AlphaMeasurement,
    prior: &GeometryPrior,
    axis: &NvAxis,
    mode: LocalizationMode,
    length: f64,
    n: usize,
    seed: u64,
) -> Result<BootstrapSamples> {
    m.validate()?;
    prior.validate()?;
    if n < 100 {
        return Err(Error::validation(format!(
            "bootstrap needs n >= 100 draws, got {n}"
        )));
    }
    let results: Vec<Result<(f64, f64)>> = par::map_indexed(n, |k| {
        bootstrap_draw(m, prior, axis, mode, length, seed, k as u64)
    });
    let mut samples = Vec::with_capacity(n);
    let mut failures = 0;
    for r in results {
        match r {
            Ok(p) => samples.push(p),
            Err(_) => failures += 1,
        }
    }
    let out = BootstrapSamples {
        samples,
        requested: n,
        failures,
    };
    if out.failure_fraction() > 0.10 {
        return Err(Error::UnstableInversion {
            failed: failures,
            total: n,
            fraction: 100.0 * out.failure_fraction(),
        });
    }
    Ok(out)
}

/// Mean position with bootstrap standard deviations.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PositionEstimate {
    /// Meters.
    pub x: f64,
    pub z: f64,
    pub std_x: f64,
    pub std_z: f64,
    /// The samples the estimate was computed from.
    pub samples: Vec<(f64, f64)>,
}

/// Mean and sample standard deviation per coordinate.
pub fn summarize(samples: &[(f64, f64)]) -> Result<PositionEstimate> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "summary needs >= 2 samples, got {}",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_z = samples.iter().map(|p| p.1).sum::<f64>() / n;
    let var_x = samples.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>() / (n - 1.0);
    let var_z = samples.iter().map(|p| (p.1 - mean_z).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(PositionEstimate {
        x: mean_x,
        z: mean_z,
        std_x: var_x.sqrt(),
        std_z: var_z.sqrt(),
        samples: samples.to_vec(),
    })
}

/// Lateral statistics over several NV estimates: mean x′ shift and the
/// population (not sample) standard deviation of x′.
pub fn array_statistics(estimates: &[PositionEstimate]) -> Result<(f64, f64)> {
    if estimates.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "array statistics need >= 2 estimates, got {}",
            estimates.len()
        )));
    }
    let n = estimates.len() as f64;
    let mean = estimates.iter().map(|e| e.x).sum::<f64>() / n;
    let var = estimates.iter().map(|e| (e.x - mean).powi(2)).sum::<f64>() / n;
    Ok((mean, var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wire_field::alpha_map;
    use approx::assert_relative_eq;

    fn nv1_alpha() -> AlphaMeasurement {
        let g = WireGeometry::default();
        let a = alpha_map(
            &g,
            LabPoint::midplane(-83.9e-9, -8.6e-9),
            &NvAxis::default(),
            WireModel::Infinite,
        )
        .unwrap();
        AlphaMeasurement::new(a.alpha_z, a.alpha_perp)
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let g = WireGeometry::default();
        for (x, z) in [
            (-83.9e-9, -8.6e-9),
            (40e-9, -30e-9),
            (0.0, -55e-9),
            (-150e-9, -2e-9),
        ] {
            let cf = rect_infinite_closed_form(&g, LabPoint::midplane(x, z));
            let quad = crate::wire_field::rect_wire_field_infinite(&g, 1.0, LabPoint::midplane(x, z))
                .unwrap();
            assert_relative_eq!(cf.x, quad.x, max_relative = 3e-6, epsilon = 1e-9);
            assert_relative_eq!(cf.z, quad.z, max_relative = 3e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn round_trip_at_nv1() {
        let g = WireGeometry::default();
        let axis = NvAxis::default();
        let m = nv1_alpha();
        let fit = fit_position(&m, &g, &axis, WireModel::Infinite, HalfPlane::Auto).unwrap();
        assert!((fit.x - (-83.9e-9)).abs() < 0.1e-9, "x = {} nm", fit.x * 1e9);
        assert!((fit.z - (-8.6e-9)).abs() < 0.1e-9, "z = {} nm", fit.z * 1e9);
        assert!(fit.residual < 1e-3);
    }

    #[test]
    fn measured_ratios_land_in_the_table_error_box() {
        let g = WireGeometry::default();
        let axis = NvAxis::default();
        let m = AlphaMeasurement::new(1.4, 1.9);
        let fit = fit_position(&m, &g, &axis, WireModel::Infinite, HalfPlane::Auto).unwrap();
        // 3× the quoted Table-1 errors around (−83.9, −8.6) nm
        assert!((fit.x - (-83.9e-9)).abs() < 3.0 * 0.8e-9 + 2e-9, "x = {} nm", fit.x * 1e9);
        assert!((fit.z - (-8.6e-9)).abs() < 3.0 * 2.7e-9 + 2e-9, "z = {} nm", fit.z * 1e9);
    }

    #[test]
    fn zero_alpha_perp_is_rejected() {
        let g = WireGeometry::default();
        let err = fit_position(
            &AlphaMeasurement::new(1.4, 0.0),
            &g,
            &NvAxis::default(),
            WireModel::Infinite,
            HalfPlane::Auto,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn unreachable_alpha_is_out_of_range() {
        let g = WireGeometry::default();
        let err = fit_position(
            &AlphaMeasurement::new(1.4, 500.0),
            &g,
            &NvAxis::default(),
            WireModel::Infinite,
            HalfPlane::Auto,
        )
        .unwrap_err();
        assert!(matches!(err, Error::OutOfRange(_)));
    }

    #[test]
    fn negative_alpha_z_prefers_positive_half_plane() {
        let g = WireGeometry::default();
        let axis = NvAxis::default();
        let base = nv1_alpha();
        let mirrored = AlphaMeasurement::new(-base.alpha_z, base.alpha_perp);
        let fit = fit_position(&mirrored, &g, &axis, WireModel::Infinite, HalfPlane::Auto)
            .unwrap();
        assert!(fit.x > 0.0, "x = {} nm", fit.x * 1e9);
        assert!((fit.x - 83.9e-9).abs() < 0.5e-9);
    }

    #[test]
    fn forced_half_plane_reports_mirror_when_competitive() {
        let g = WireGeometry::default();
        let axis = NvAxis::default();
        // near-zero alpha_z: both half-planes fit almost equally well
        let probe = alpha_map(
            &g,
            LabPoint::midplane(-0.2e-9, -40e-9),
            &axis,
            WireModel::Infinite,
        )
        .unwrap();
        let m = AlphaMeasurement::new(probe.alpha_z, probe.alpha_perp);
        let fit = fit_position(&m, &g, &axis, WireModel::Infinite, HalfPlane::Auto).unwrap();
        assert!(fit.mirror.is_some());
        let forced = fit_position(&m, &g, &axis, WireModel::Infinite, HalfPlane::PositiveX)
            .unwrap();
        assert!(forced.x >= 0.0);
    }

    #[test]
    fn bootstrap_deterministic_and_degenerate_limit() {
        let axis = NvAxis::default();
        let m = nv1_alpha();
        let tight = AlphaMeasurement {
            sigma_alpha: 1e-12,
            ..m
        };
        let prior = GeometryPrior {
            w_sigma: 0.0,
            t_sigma: 0.0,
            ..GeometryPrior::default()
        };
        let a = bootstrap_positions(
            &tight,
            &prior,
            &axis,
            LocalizationMode::Infinite,
            500e-9,
            100,
            9,
        )
        .unwrap();
        let b = bootstrap_positions(
            &tight,
            &prior,
            &axis,
            LocalizationMode::Infinite,
            500e-9,
            100,
            9,
        )
        .unwrap();
        assert_eq!(a, b);
        // zero-sigma priors and (near) zero measurement sigma: all samples identical
        let (x0, z0) = a.samples[0];
        for &(x, z) in &a.samples {
            assert!((x - x0).abs() < 0.05e-9 && (z - z0).abs() < 0.05e-9);
        }
        assert_eq!(a.failures, 0);
    }

    #[test]
    fn summary_and_array_statistics() {
        let est = summarize(&[(1.0, -2.0), (1.0, -2.0), (1.0, -2.0)]).unwrap();
        assert_eq!(est.std_x, 0.0);
        assert_eq!(est.std_z, 0.0);

        // Table-1 lateral positions
        let estimates: Vec<PositionEstimate> = [-83.9e-9, -122.6e-9, -152.3e-9]
            .iter()
            .map(|&x| PositionEstimate {
                x,
                z: -10e-9,
                std_x: 0.0,
                std_z: 0.0,
                samples: vec![],
            })
            .collect();
        let (mean, pop_std) = array_statistics(&estimates).unwrap();
        assert_relative_eq!(mean, -119.6e-9, epsilon = 0.05e-9);
        assert_relative_eq!(pop_std, 28.0e-9, epsilon = 0.1e-9);

        assert!(array_statistics(&estimates[..1]).is_err());
    }

    #[test]
    fn summary_invariant_under_permutation() {
        let mut samples = vec![(1.0, 2.0), (3.0, -1.0), (-2.0, 0.5), (0.2, 0.8)];
        let a = summarize(&samples).unwrap();
        samples.reverse();
        let b = summarize(&samples).unwrap();
        assert_relative_eq!(a.x, b.x, max_relative = 1e-15);
        assert_relative_eq!(a.std_z, b.std_z, max_relative = 1e-12);
    }
}
