//! Sinusoid fits of nuclear-oscillation traces and the B_⊥ extraction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fitting::linear::{linear_fit, LinearFit};
use crate::fitting::lm::{self, LeastSquaresModel, LmOptions};
use crate::spin_model::SpinConstants;

/// A nuclear-oscillation trace at one drive current.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NutationTrace {
    /// Strictly increasing delays Δt, seconds.
    pub delays: Vec<f64>,
    /// Photoluminescence contrast, dimensionless.
    pub signal: Vec<f64>,
    /// Drive current i₀, A.
    pub current: f64,
}

impl NutationTrace {
    pub fn validate(&self) -> Result<()> {
        if self.delays.len() != self.signal.len() {
            return Err(Error::validation("delay and signal lengths differ"));
        }
        if self.delays.len() < 16 {
            return Err(Error::validation("trace needs at least 16 samples"));
        }
        if self.delays.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("delays must be strictly increasing"));
        }
        Ok(())
    }

    pub fn span(&self) -> f64 {
        self.delays[self.delays.len() - 1] - self.delays[0]
    }
}

/// Fitted parameters of a + b·cos(2π f Δt + φ).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SinusoidFit {
    /// Hz.
    pub frequency: f64,
    pub frequency_stderr: f64,
    pub amplitude: f64,
    pub amplitude_stderr: f64,
    /// Radians, in (−π, π].
    pub phase: f64,
    pub phase_stderr: f64,
    pub offset: f64,
    pub offset_stderr: f64,
    pub residual_norm: f64,
}

/// Discrete periodogram of the mean-subtracted trace on an oversampled
/// frequency grid up to the mean Nyquist rate. Returns (frequency, power)
/// rows; power is |Σ y e^{−2πift}|².
pub fn periodogram(trace: &NutationTrace, oversample: usize) -> Vec<(f64, f64)> {
    let n = trace.delays.len();
    let span = trace.span();
    let mean = trace.signal.iter().sum::<f64>() / n as f64;
    let nyquist = 0.5 * (n - 1) as f64 / span;
    let n_freq = (n / 2) * oversample;
    (1..=n_freq)
        .map(|j| {
            let f = nyquist * j as f64 / n_freq as f64;
            let (mut re, mut im) = (0.0, 0.0);
            for (&t, &y) in trace.delays.iter().zip(&trace.signal) {
                let phase = -2.0 * std::f64::consts::PI * f * t;
                re += (y - mean) * phase.cos();
                im += (y - mean) * phase.sin();
            }
            (f, re * re + im * im)
        })
        .collect()
}

struct SinusoidModel<'a> {
    t: &'a [f64],
    y: &'a [f64],
}

impl LeastSquaresModel for SinusoidModel<'_> {
    fn residual_count(&self) -> usize {
        self.t.len()
    }
    fn parameter_count(&self) -> usize {
        4
    }
    fn residuals(&self, p: &[f64], r: &mut DVector<f64>) {
        let (a, b, f, phi) = (p[0], p[1], p[2], p[3]);
        for (i, (&t, &y)) in self.t.iter().zip(self.y).enumerate() {
            r[i] = a + b * (2.0 * std::f64::consts::PI * f * t + phi).cos() - y;
        }
    }
    fn jacobian(&self, p: &[f64], j: &mut DMatrix<f64>) {
        let (b, f, phi) = (p[1], p[2], p[3]);
        for (i, &t) in self.t.iter().enumerate() {
            let arg = 2.0 * std::f64::consts::PI * f * t + phi;
            j[(i, 0)] = 1.0;
            j[(i, 1)] = arg.cos();
            j[(i, 2)] = -b * arg.sin() * 2.0 * std::f64::consts::PI * t;
            j[(i, 3)] = -b * arg.sin();
        }
    }
}

/// Least-squares fit of a decay-free sinusoid, seeded by the periodogram
/// peak.
///
/// Traces without a significant spectral peak (power < 3× the median, the
/// B_⊥ ≈ 0 signature) report [`Error::NoOscillation`]; traces spanning
/// fewer than two periods of the detected frequency are rejected.
pub fn fit_sinusoid(trace: &NutationTrace) -> Result<SinusoidFit> {
    trace.validate()?;
    let pg = periodogram(trace, 4);
    let (mut f0, mut peak) = (0.0, 0.0);
    for &(f, p) in &pg {
        if p > peak {
            peak = p;
            f0 = f;
        }
    }
    let mut powers: Vec<f64> = pg.iter().map(|&(_, p)| p).collect();
    powers.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = powers[powers.len() / 2];
    if peak < 3.0 * median || peak == 0.0 {
        return Err(Error::NoOscillation { peak, median });
    }
    if f0 * trace.span() < 2.0 {
        return Err(Error::InsufficientData(format!(
            "trace spans {:.2} periods of the dominant {:.3e} Hz; need >= 2",
            f0 * trace.span(),
            f0
        )));
    }

    let n = trace.delays.len() as f64;
    let mean = trace.signal.iter().sum::<f64>() / n;
    // Amplitude and phase seeds from the DFT coefficient at the peak.
    let (mut re, mut im) = (0.0, 0.0);
    for (&t, &y) in trace.delays.iter().zip(&trace.signal) {
        let phase = -2.0 * std::f64::consts::PI * f0 * t;
        re += (y - mean) * phase.cos();
        im += (y - mean) * phase.sin();
    }
    let b0 = 2.0 * (re * re + im * im).sqrt() / n;
    let phi0 = (-im).atan2(re);

    let model = SinusoidModel {
        t: &trace.delays,
        y: &trace.signal,
    };
    let fit = lm::fit(&model, &[mean, b0, f0, phi0], &LmOptions::default())?;

    let (offset, mut amplitude, mut frequency, mut phase) =
        (fit.params[0], fit.params[1], fit.params[2], fit.params[3]);
    if frequency < 0.0 {
        frequency = -frequency;
        phase = -phase;
    }
    if amplitude < 0.0 {
        amplitude = -amplitude;
        phase += std::f64::consts::PI;
    }
    phase = phase.rem_euclid(2.0 * std::f64::consts::PI);
    if phase > std::f64::consts::PI {
        phase -= 2.0 * std::f64::consts::PI;
    }

    Ok(SinusoidFit {
        frequency,
        frequency_stderr: fit.standard_errors[2],
        amplitude,
        amplitude_stderr: fit.standard_errors[1],
        phase,
        phase_stderr: fit.standard_errors[3],
        offset,
        offset_stderr: fit.standard_errors[0],
        residual_norm: fit.residual_norm,
    })
}

/// Inverts ω_NO = √((γ_I B_z)² + (γ_I,⊥ B_⊥)²) for B_⊥.
///
/// Fails when the measured frequency sits below the axial floor |γ_I B_z|
/// (noise pushed it under); the caller decides how to handle that draw.
pub fn bperp_from_omega(f_no: f64, b_z: f64, constants: &SpinConstants) -> Result<f64> {
    let floor = (constants.gamma_i * b_z).abs();
    if f_no < floor {
        return Err(Error::InconsistentInputs(format!(
            "oscillation frequency {f_no:.3e} Hz below the axial floor {floor:.3e} Hz"
        )));
    }
    Ok((f_no * f_no - floor * floor).sqrt() / constants.gamma_i_perp)
}

/// How B_⊥ magnitudes are regressed against current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPerpModel {
    /// Straight line of B_⊥ against |i₀| (no ambient transverse field).
    PlainAbsCurrent,
    /// |a·i₀ + b| against signed i₀, for a non-negligible ambient
    /// transverse component.
    SignedLine,
}

struct SignedLineModel<'a> {
    i: &'a [f64],
    b: &'a [f64],
}

impl LeastSquaresModel for SignedLineModel<'_> {
    fn residual_count(&self) -> usize {
        self.i.len()
    }
    fn parameter_count(&self) -> usize {
        2
    }
    fn residuals(&self, p: &[f64], r: &mut DVector<f64>) {
        for (k, (&i, &b)) in self.i.iter().zip(self.b).enumerate() {
            r[k] = (p[0] * i + p[1]).abs() - b;
        }
    }
    fn jacobian(&self, p: &[f64], j: &mut DMatrix<f64>) {
        for (k, &i) in self.i.iter().enumerate() {
            let s = (p[0] * i + p[1]).signum();
            j[(k, 0)] = s * i;
            j[(k, 1)] = s;
        }
    }
}

/// Extracts α_⊥ from (i₀, B_⊥) pairs. B_⊥ is unsigned, so the default
/// model regresses against |i₀|; the signed-line model handles an ambient
/// transverse offset.
pub fn extract_alpha_perp(series: &[(f64, f64)], model: AlphaPerpModel) -> Result<LinearFit> {
    let mut currents: Vec<f64> = series.iter().map(|&(i, _)| i).collect();
    currents.sort_by(|a, b| a.partial_cmp(b).unwrap());
    currents.dedup();
    if currents.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "alpha_perp extraction needs >= 3 distinct currents, got {}",
            currents.len()
        )));
    }
    match model {
        AlphaPerpModel::PlainAbsCurrent => {
            let x: Vec<f64> = series.iter().map(|&(i, _)| i.abs()).collect();
            let y: Vec<f64> = series.iter().map(|&(_, b)| b).collect();
            linear_fit(&x, &y, None)
        }
        AlphaPerpModel::SignedLine => {
            let x: Vec<f64> = series.iter().map(|&(i, _)| i).collect();
            let y: Vec<f64> = series.iter().map(|&(_, b)| b).collect();
            // Seed from the plain fit; both current-sign conventions are
            // tried and the better one kept.
            let plain = {
                let xa: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                linear_fit(&xa, &y, None)?
            };
            let mut best: Option<lm::LmFit> = None;
            for sign in [1.0, -1.0] {
                let model = SignedLineModel { i: &x, b: &y };
                if let Ok(fit) = lm::fit(
                    &model,
                    &[sign * plain.slope, plain.intercept.max(0.0)],
                    &LmOptions::default(),
                ) {
                    if best.as_ref().is_none_or(|b| fit.residual_norm < b.residual_norm) {
                        best = Some(fit);
                    }
                }
            }
            let fit = best.ok_or(Error::FitDidNotConverge {
                iterations: 200,
                residual_norm: f64::NAN,
            })?;
            Ok(LinearFit {
                slope: fit.params[0].abs(),
                slope_stderr: fit.standard_errors[0],
                intercept: fit.params[1],
                intercept_stderr: fit.standard_errors[1],
                residual_norm: fit.residual_norm,
                n_points: series.len(),
            })
        }
    }
}
