//! Four-Gaussian ODMR line fitting and the B_z extraction built on it.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fitting::linear::{linear_fit, LinearFit};
use crate::fitting::lm::{self, LeastSquaresModel, LmOptions};
use crate::spin_model::{Branch, SpinConstants};

/// A measured (or synthetic) ODMR spectrum at one drive current.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OdmrSpectrum {
    /// Strictly increasing, Hz.
    pub frequencies: Vec<f64>,
    /// Photoluminescence, counts/s.
    pub pl: Vec<f64>,
    /// Drive current i₀, A.
    pub current: f64,
    /// Optional per-point 1σ noise estimate, counts/s.
    pub noise: Option<Vec<f64>>,
}

impl OdmrSpectrum {
    pub fn validate(&self) -> Result<()> {
        if self.frequencies.len() != self.pl.len() {
            return Err(Error::validation("frequency and PL lengths differ"));
        }
        if self.frequencies.len() < 16 {
            return Err(Error::validation("spectrum needs at least 16 samples"));
        }
        if self.frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("frequencies must be strictly increasing"));
        }
        if let Some(n) = &self.noise {
            if n.len() != self.pl.len() || n.iter().any(|&s| !(s > 0.0)) {
                return Err(Error::validation("noise estimates must be positive, one per point"));
            }
        }
        Ok(())
    }
}

/// One Gaussian line of the quadruplet; dips carry negative amplitude.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GaussianComponent {
    /// Hz.
    pub center: f64,
    /// Hz, > 0.
    pub sigma: f64,
    /// counts/s; negative for dips.
    pub amplitude: f64,
    /// Hz.
    pub center_stderr: f64,
}

/// Baseline plus four Gaussian components, sorted by center.
///
/// With resolved electron branches the ascending centers correspond to
/// (−, +1/2), (−, −1/2), (+, −1/2), (+, +1/2).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GaussianQuadruplet {
    /// counts/s.
    pub baseline: f64,
    pub components: [GaussianComponent; 4],
    /// Weighted residual norm of the fit.
    pub residual_norm: f64,
}

impl GaussianQuadruplet {
    /// Centers in ascending order.
    pub fn centers(&self) -> [f64; 4] {
        [
            self.components[0].center,
            self.components[1].center,
            self.components[2].center,
            self.components[3].center,
        ]
    }

    /// Branch / m_I labels matching the ascending center order under the
    /// resolved-branch assumption.
    pub fn labels() -> [(Branch, i32); 4] {
        [
            (Branch::Minus, 1),
            (Branch::Minus, -1),
            (Branch::Plus, -1),
            (Branch::Plus, 1),
        ]
    }
}

/// Sum-of-Gaussians residual model over a fixed baseline + 4 lines.
/// Parameter layout: [baseline, (amp, center, sigma) × 4].
struct QuadrupletModel<'a> {
    freq: &'a [f64],
    pl: &'a [f64],
    weights: Option<&'a [f64]>,
}

impl QuadrupletModel<'_> {
    fn weight(&self, i: usize) -> f64 {
        self.weights.map_or(1.0, |w| 1.0 / w[i])
    }
}

impl LeastSquaresModel for QuadrupletModel<'_> {
    fn residual_count(&self) -> usize {
        self.freq.len()
    }
    fn parameter_count(&self) -> usize {
        13
    }
    fn residuals(&self, p: &[f64], r: &mut DVector<f64>) {
        for (i, (&f, &y)) in self.freq.iter().zip(self.pl).enumerate() {
            let mut model = p[0];
            for k in 0..4 {
                let (a, c, s) = (p[1 + 3 * k], p[2 + 3 * k], p[3 + 3 * k]);
                let t = (f - c) / s;
                model += a * (-0.5 * t * t).exp();
            }
            r[i] = (model - y) * self.weight(i);
        }
    }
    fn jacobian(&self, p: &[f64], j: &mut DMatrix<f64>) {
        for (i, &f) in self.freq.iter().enumerate() {
            let w = self.weight(i);
            j[(i, 0)] = w;
            for k in 0..4 {
                let (a, c, s) = (p[1 + 3 * k], p[2 + 3 * k], p[3 + 3 * k]);
                let t = (f - c) / s;
                let g = (-0.5 * t * t).exp();
                j[(i, 1 + 3 * k)] = g * w;
                j[(i, 2 + 3 * k)] = a * g * t / s * w;
                j[(i, 3 + 3 * k)] = a * g * t * t / s * w;
            }
        }
    }
}

/// Same model with one shared linewidth: [baseline, sigma, (amp, center) × 4].
/// The shared width removes the width/amplitude trade-off between
/// overlapped doublet partners that traps the free fit in false minima;
/// its solution seeds the free-width fit.
struct CommonSigmaModel<'a> {
    freq: &'a [f64],
    pl: &'a [f64],
    weights: Option<&'a [f64]>,
}

impl CommonSigmaModel<'_> {
    fn weight(&self, i: usize) -> f64 {
        self.weights.map_or(1.0, |w| 1.0 / w[i])
    }
}

impl LeastSquaresModel for CommonSigmaModel<'_> {
    fn residual_count(&self) -> usize {
        self.freq.len()
    }
    fn parameter_count(&self) -> usize {
        10
    }
    fn residuals(&self, p: &[f64], r: &mut DVector<f64>) {
        let s = p[1];
        for (i, (&f, &y)) in self.freq.iter().zip(self.pl).enumerate() {
            let mut model = p[0];
            for k in 0..4 {
                let (a, c) = (p[2 + 2 * k], p[3 + 2 * k]);
                let t = (f - c) / s;
                model += a * (-0.5 * t * t).exp();
            }
            r[i] = (model - y) * self.weight(i);
        }
    }
    fn jacobian(&self, p: &[f64], j: &mut DMatrix<f64>) {
        let s = p[1];
        for (i, &f) in self.freq.iter().enumerate() {
            let w = self.weight(i);
            j[(i, 0)] = w;
            j[(i, 1)] = 0.0;
            for k in 0..4 {
                let (a, c) = (p[2 + 2 * k], p[3 + 2 * k]);
                let t = (f - c) / s;
                let g = (-0.5 * t * t).exp();
                j[(i, 1)] += a * g * t * t / s * w;
                j[(i, 2 + 2 * k)] = g * w;
                j[(i, 3 + 2 * k)] = a * g * t / s * w;
            }
        }
    }
}

/// Moving-average smoothing with the documented window of 5 samples.
fn smooth(y: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    (0..y.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(y.len());
            y[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

fn percentile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((v.len() - 1) as f64 * q).round() as usize;
    v[idx]
}

/// Robust per-point noise scale from first differences: for iid Gaussian
/// noise the median |Δy| equals 0.9539 σ.
fn noise_scale(y: &[f64]) -> f64 {
    let mut diffs: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if diffs.is_empty() {
        return 0.0;
    }
    diffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    diffs[diffs.len() / 2] / 0.9539
}

/// Half-width at half depth around `idx`, taken on the side that climbs
/// back fastest (the side not merging into a neighbor), in samples.
fn half_width_samples(trace: &[f64], baseline: f64, idx: usize) -> usize {
    let depth = baseline - trace[idx];
    let half = trace[idx] + 0.5 * depth;
    let n = trace.len();
    let mut left = idx;
    while left > 0 && trace[left] < half {
        left -= 1;
    }
    let mut right = idx;
    while right + 1 < n && trace[right] < half {
        right += 1;
    }
    (idx - left).min(right - idx).max(1)
}

/// Greedy dip seeds by matched subtraction: take the deepest point of the
/// residual, estimate the line width on the heavily smoothed trace,
/// subtract that Gaussian, repeat. Robust against partially merged lines
/// and against flank noise, which cannot survive the subtraction of the
/// line it rides on. Returns up to `count` (index, depth, sigma) seeds.
fn greedy_dip_seeds(
    smoothed: &[f64],
    wide: &[f64],
    baseline: f64,
    floor: f64,
    df: f64,
    count: usize,
) -> Vec<(usize, f64, f64)> {
    let n = smoothed.len();
    let mut resid = smoothed.to_vec();
    let mut seeds: Vec<(usize, f64, f64)> = Vec::new();
    let mut attempts = 0;
    while seeds.len() < count && attempts < count + 12 {
        attempts += 1;
        let (idx, &val) = resid
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .expect("non-empty spectrum");
        let depth = baseline - val;
        if depth <= floor {
            break;
        }
        // Leftover shoulder of an already-claimed line: flatten locally
        // and look again.
        if let Some(&(near, _, s)) = seeds
            .iter()
            .find(|&&(i, _, s)| (idx.abs_diff(i) as f64) * df <= s.max(3.0 * df))
        {
            let _ = near;
            let guard = ((s / df).ceil() as usize).max(2);
            let lo = idx.saturating_sub(guard);
            let hi = (idx + guard).min(n - 1);
            for r in &mut resid[lo..=hi] {
                *r = r.max(baseline);
            }
            continue;
        }
        let hw = half_width_samples(wide, baseline, idx);
        let sigma = (2.0 * hw as f64 * df / 2.355).max(df);
        seeds.push((idx, depth, sigma));
        for (i, r) in resid.iter_mut().enumerate() {
            let t = (i as f64 - idx as f64) * df / sigma;
            *r += depth * (-0.5 * t * t).exp();
        }
    }
    seeds
}

/// Two-stage LM (shared linewidth, then free widths) from one seed set.
fn fit_from_seeds(
    spectrum: &OdmrSpectrum,
    seeds: &[(f64, f64, f64)], // (center Hz, depth, sigma Hz), sorted
) -> Result<GaussianQuadruplet> {
    let freq = &spectrum.frequencies;
    let pl = &spectrum.pl;
    let n = freq.len();
    let baseline0 = percentile(pl, 0.9);

    let mut sigmas: Vec<f64> = seeds.iter().map(|&(_, _, s)| s).collect();
    sigmas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sigma_med = 0.5 * (sigmas[1] + sigmas[2]);

    let mut p0 = vec![baseline0, sigma_med];
    for &(center, depth, _) in seeds {
        p0.push(-depth);
        p0.push(center);
    }
    let common = CommonSigmaModel {
        freq,
        pl,
        weights: spectrum.noise.as_deref(),
    };
    let stage1 = lm::fit(&common, &p0, &LmOptions::default())?;

    let mut p1 = vec![stage1.params[0]];
    for k in 0..4 {
        p1.push(stage1.params[2 + 2 * k]);
        p1.push(stage1.params[3 + 2 * k]);
        p1.push(stage1.params[1].abs());
    }
    let model = QuadrupletModel {
        freq,
        pl,
        weights: spectrum.noise.as_deref(),
    };
    let fit = lm::fit(&model, &p1, &LmOptions::default())?;

    let mut components: Vec<GaussianComponent> = (0..4)
        .map(|k| GaussianComponent {
            amplitude: fit.params[1 + 3 * k],
            center: fit.params[2 + 3 * k],
            sigma: fit.params[3 + 3 * k].abs(),
            center_stderr: fit.standard_errors[2 + 3 * k],
        })
        .collect();
    components.sort_by(|a, b| a.center.partial_cmp(&b.center).unwrap());
    // Dips only, sane widths, centers on the scan: anything else is a
    // collapsed or escaped component, i.e. a failed fit.
    let f_span = freq[n - 1] - freq[0];
    if components.iter().any(|c| {
        !(c.sigma > 0.0)
            || c.sigma > 0.25 * f_span
            || c.amplitude >= 0.0
            || c.center < freq[0]
            || c.center > freq[n - 1]
    }) {
        return Err(Error::FitDidNotConverge {
            iterations: fit.iterations,
            residual_norm: fit.residual_norm,
        });
    }

    Ok(GaussianQuadruplet {
        baseline: fit.params[0],
        components: [components[0], components[1], components[2], components[3]],
        residual_norm: fit.residual_norm,
    })
}

/// Internal-consistency test of a fitted quadruplet: the two doublets
/// must carry comparable splittings and depths. Both facts follow from
/// the hyperfine structure without knowing its constants.
fn quadruplet_consistent(q: &GaussianQuadruplet) -> bool {
    let c = q.centers();
    let s01 = c[1] - c[0];
    let s23 = c[3] - c[2];
    let splittings_match = (s01 - s23).abs() <= 0.5 * s01.max(s23);
    let depths: Vec<f64> = q.components.iter().map(|g| -g.amplitude).collect();
    let depth_ratio =
        depths.iter().cloned().fold(f64::MIN, f64::max) / depths.iter().cloned().fold(f64::MAX, f64::min);
    splittings_match && depth_ratio < 5.0
}

/// Nonlinear least-squares fit of baseline + four Gaussian dips.
///
/// Initial guesses come from smoothed extremum detection with matched
/// subtraction; if the resulting fit violates the doublet structure, the
/// fit restarts from symmetric seeds around the two branch envelopes at a
/// few trial splittings. Inverse-variance weighting applies when the
/// spectrum carries per-point noise estimates.
pub fn fit_four_gaussians(spectrum: &OdmrSpectrum) -> Result<GaussianQuadruplet> {
    spectrum.validate()?;
    let freq = &spectrum.frequencies;
    let pl = &spectrum.pl;
    let n = freq.len();
    let df = (freq[n - 1] - freq[0]) / (n - 1) as f64;

    let window = 5;
    let smoothed = smooth(pl, window);
    // Width estimation runs on a heavier smoothing where half-depth scans
    // are not cut short by point noise.
    let wide = smooth(pl, 11);
    let baseline0 = percentile(&smoothed, 0.9);
    // Dips must clear both the smoothed shot noise and a structural floor
    // (subtraction artifacts of already-found lines).
    let deepest = baseline0 - smoothed.iter().copied().fold(f64::INFINITY, f64::min);
    let floor = (2.5 * noise_scale(pl) / (window as f64).sqrt()).max(0.05 * deepest);

    let greedy = greedy_dip_seeds(&smoothed, &wide, baseline0, floor, df, 4);
    if greedy.len() < 4 {
        return Err(Error::UnderResolved {
            found: greedy.len(),
            needed: 4,
        });
    }

    let mut seed_sets: Vec<Vec<(f64, f64, f64)>> = Vec::new();
    let mut sorted_greedy = greedy.clone();
    sorted_greedy.sort_by_key(|&(idx, _, _)| idx);
    seed_sets.push(
        sorted_greedy
            .iter()
            .map(|&(idx, depth, sigma)| (freq[idx], depth, sigma))
            .collect(),
    );

    // Branch-envelope fallbacks: the two deepest well-separated minima
    // anchor the branches; doublet partners are seeded symmetrically at a
    // few trial splittings.
    let b1 = greedy[0].0;
    if let Some(&(b2, d2, _)) = greedy.iter().find(|&&(i, _, _)| i.abs_diff(b1) >= n / 6) {
        let d1 = greedy[0].1;
        let gap = b1.abs_diff(b2) as f64 * df;
        for frac in [12.0, 8.0, 6.0] {
            let delta = gap / frac;
            let sigma = (0.8 * delta).max(df);
            let mut set: Vec<(f64, f64, f64)> = [b1, b2]
                .iter()
                .zip([d1, d2])
                .flat_map(|(&b, d)| {
                    [
                        (freq[b] - delta, 0.75 * d, sigma),
                        (freq[b] + delta, 0.75 * d, sigma),
                    ]
                })
                .collect();
            set.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            seed_sets.push(set);
        }
    }

    let mut best: Option<GaussianQuadruplet> = None;
    for seeds in &seed_sets {
        match fit_from_seeds(spectrum, seeds) {
            Ok(q) => {
                if quadruplet_consistent(&q) {
                    return Ok(q);
                }
                if best
                    .as_ref()
                    .is_none_or(|b| q.residual_norm < b.residual_norm)
                {
                    best = Some(q);
                }
            }
            Err(_) => continue,
        }
    }
    best.ok_or(Error::FitDidNotConverge {
        iterations: 200,
        residual_norm: f64::NAN,
    })
}

/// |B_z| from the four line centers: the m_I contributions cancel in the
/// branch means, leaving (mean₊ − mean₋) = 2 γ_e B_z.
///
/// For resolved branches (2 γ_e B_z > A_z) the sorted centers pair as
/// (0,1)/(2,3); below that the branches interleave as (0,2)/(1,3). The
/// pairing whose within-branch splittings match A_z is used. A single
/// spectrum fixes only the magnitude of B_z; current-sign bookkeeping
/// happens in the series pipeline. Exactly coincident pairs (a pure
/// hyperfine spectrum) return B_z = 0; branch means separated by less
/// than 2 A_z are otherwise reported ambiguous.
pub fn bz_from_centers(q: &GaussianQuadruplet, constants: &SpinConstants) -> Result<f64> {
    let c = q.centers();
    // (branch-mean separation, deviation of within-branch splittings from A_z)
    let score = |lo: [usize; 2], hi: [usize; 2]| -> (f64, f64) {
        let sep = 0.5 * (c[hi[0]] + c[hi[1]]) - 0.5 * (c[lo[0]] + c[lo[1]]);
        let s1 = (c[lo[1]] - c[lo[0]]).abs();
        let s2 = (c[hi[1]] - c[hi[0]]).abs();
        (sep, (s1 - constants.a_z).abs() + (s2 - constants.a_z).abs())
    };
    let resolved = score([0, 1], [2, 3]);
    let interleaved = score([0, 2], [1, 3]);
    let separation = if resolved.1 <= interleaved.1 {
        resolved.0
    } else {
        interleaved.0
    };
    if separation.abs() < 1.0 {
        return Ok(0.0);
    }
    if separation < 2.0 * constants.a_z {
        return Err(Error::AmbiguousBranches {
            separation_hz: separation,
        });
    }
    Ok(separation / (2.0 * constants.gamma_e))
}

/// Ordinary least squares of B_z against drive current. The slope is
/// α_z (T/A); the intercept is the ambient axial field, reported but
/// unused downstream.
pub fn extract_alpha_z(series: &[(f64, f64)]) -> Result<LinearFit> {
    let mut currents: Vec<f64> = series.iter().map(|&(i, _)| i).collect();
    currents.sort_by(|a, b| a.partial_cmp(b).unwrap());
    currents.dedup();
    if currents.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "alpha_z extraction needs >= 3 distinct currents, got {}",
            currents.len()
        )));
    }
    let x: Vec<f64> = series.iter().map(|&(i, _)| i).collect();
    let y: Vec<f64> = series.iter().map(|&(_, b)| b).collect();
    linear_fit(&x, &y, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitting::synth::{synth_odmr, OdmrSynthSettings};
    use crate::spin_model::secular_transitions;
    use approx::assert_relative_eq;

    fn noiseless_quadruplet(constants: &SpinConstants, b_z: f64) -> OdmrSpectrum {
        let settings = OdmrSynthSettings {
            contrast: 0.03,
            ..OdmrSynthSettings::noise_free()
        };
        synth_odmr(constants, b_z, &settings, 1e-4, 0)
    }

    #[test]
    fn noise_free_fit_recovers_centers_exactly() {
        let constants = SpinConstants::default();
        let b_z = 0.3e-3;
        let spectrum = noiseless_quadruplet(&constants, b_z);
        let quad = fit_four_gaussians(&spectrum).unwrap();
        let expected = secular_transitions(&constants, b_z).sorted();
        for (got, want) in quad.centers().iter().zip(expected) {
            assert!(
                (got - want).abs() < 1e-3 * 1e6,
                "center {got} vs {want}"
            );
        }
        // doublet splitting within each branch
        let c = quad.centers();
        assert_relative_eq!(c[1] - c[0], constants.a_z, max_relative = 1e-6);
        assert_relative_eq!(c[3] - c[2], constants.a_z, max_relative = 1e-6);
    }

    #[test]
    fn shot_noise_fit_recovers_centers_within_three_sigma() {
        let constants = SpinConstants::default();
        let b_z = 0.336e-3;
        let settings = OdmrSynthSettings::default(); // 3% contrast, 100 kcps
        let spectrum = synth_odmr(&constants, b_z, &settings, 2.4e-4, 7);
        let quad = fit_four_gaussians(&spectrum).unwrap();
        let expected = secular_transitions(&constants, b_z).sorted();
        for (comp, want) in quad.components.iter().zip(expected) {
            let tol = 4.0 * comp.center_stderr.max(1e3);
            assert!(
                (comp.center - want).abs() < tol,
                "center {} vs {} (4se = {})",
                comp.center,
                want,
                tol
            );
        }
    }

    #[test]
    fn under_resolved_doublet_is_reported() {
        let constants = SpinConstants::default();
        // At B_z = 0 only two dips exist.
        let spectrum = noiseless_quadruplet(&constants, 0.0);
        let err = fit_four_gaussians(&spectrum).unwrap_err();
        assert!(matches!(err, Error::UnderResolved { .. }));
    }

    #[test]
    fn bz_inversion_round_trip() {
        let constants = SpinConstants::default();
        for b_z in [0.15e-3, 0.3e-3, 1.2e-3] {
            let t = secular_transitions(&constants, b_z).sorted();
            let quad = quad_from_centers(t);
            let recovered = bz_from_centers(&quad, &constants).unwrap();
            assert_relative_eq!(recovered, b_z, max_relative = 1e-12);
        }
    }

    #[test]
    fn bz_zero_field_cancellation() {
        let constants = SpinConstants::default();
        let t = secular_transitions(&constants, 0.0).sorted();
        let quad = quad_from_centers(t);
        assert_eq!(bz_from_centers(&quad, &constants).unwrap(), 0.0);
    }

    #[test]
    fn bz_ambiguous_for_interleaved_branches() {
        let constants = SpinConstants::default();
        // Earth-field scale: branches interleave, assignment is ambiguous.
        let t = secular_transitions(&constants, 30e-6).sorted();
        let quad = quad_from_centers(t);
        let err = bz_from_centers(&quad, &constants).unwrap_err();
        assert!(matches!(err, Error::AmbiguousBranches { .. }));
    }

    fn quad_from_centers(centers: [f64; 4]) -> GaussianQuadruplet {
        let comp = |center: f64| GaussianComponent {
            center,
            sigma: 1e6,
            amplitude: -3000.0,
            center_stderr: 0.0,
        };
        GaussianQuadruplet {
            baseline: 1e5,
            components: [
                comp(centers[0]),
                comp(centers[1]),
                comp(centers[2]),
                comp(centers[3]),
            ],
            residual_norm: 0.0,
        }
    }

    #[test]
    fn alpha_z_extraction_from_synthetic_series() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let alpha = 1.4;
        let intercept = 30e-6;
        let series: Vec<(f64, f64)> = [-240e-6, -160e-6, 160e-6, 240e-6]
            .iter()
            .map(|&i| (i, alpha * i + intercept + 2e-6 * rng.gen_range(-1.0..1.0)))
            .collect();
        let fit = extract_alpha_z(&series).unwrap();
        assert!((fit.slope - alpha).abs() < 3.0 * fit.slope_stderr.max(1e-3));
        assert!((fit.intercept - intercept).abs() < 3e-5);
    }

    #[test]
    fn alpha_z_exact_two_slope_line() {
        let series = [(0.0, 1e-5), (1e-4, 1.5e-4), (2e-4, 2.9e-4)];
        let fit = extract_alpha_z(&series).unwrap();
        assert_relative_eq!(fit.slope, 1.4, max_relative = 1e-10);
    }

    #[test]
    fn alpha_z_requires_three_distinct_currents() {
        let err = extract_alpha_z(&[(1e-4, 1.0), (1e-4, 1.1), (1e-4, 0.9)]).unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
        let err2 = extract_alpha_z(&[(1e-4, 1.0), (2e-4, 2.0)]).unwrap_err();
        assert!(matches!(err2, Error::InsufficientData(_)));
    }
}
