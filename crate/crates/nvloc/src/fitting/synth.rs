//! Seed-deterministic synthetic data generators, the round-trip oracles
//! for the fitting pipelines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::fitting::nutation::NutationTrace;
use crate::fitting::odmr::OdmrSpectrum;
use crate::spin_model::{nuclear_oscillation_frequency, secular_transitions, SpinConstants};

/// Knobs of the ODMR generator. Defaults follow the reported experiment:
/// ~100 kcps count rate, 3% contrast, 1 MHz lines (linewidths are not
/// tabulated; 1 MHz is a plausible scale and freely tunable).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OdmrSynthSettings {
    /// Gaussian line sigma, Hz.
    pub linewidth: f64,
    /// Fractional dip depth per line.
    pub contrast: f64,
    /// Baseline photoluminescence, counts/s.
    pub rate: f64,
    /// Integration time per point, s; sets the shot noise.
    pub integration: f64,
    /// Number of frequency samples.
    pub points: usize,
    /// Poisson photon noise on/off.
    pub shot_noise: bool,
}

impl Default for OdmrSynthSettings {
    fn default() -> Self {
        OdmrSynthSettings {
            linewidth: 1e6,
            contrast: 0.03,
            rate: 1e5,
            integration: 0.1,
            points: 301,
            shot_noise: true,
        }
    }
}

impl OdmrSynthSettings {
    /// Same layout, no photon noise: the exact-model-class oracle.
    pub fn noise_free() -> Self {
        OdmrSynthSettings {
            shot_noise: false,
            ..OdmrSynthSettings::default()
        }
    }
}

/// Synthesizes the four-dip spectrum at axial field `b_z` for drive
/// current `current`. Line centers follow the secular formula; photon
/// counts are Poisson-distributed; output is bitwise deterministic in
/// `seed`.
pub fn synth_odmr(
    constants: &SpinConstants,
    b_z: f64,
    settings: &OdmrSynthSettings,
    current: f64,
    seed: u64,
) -> OdmrSpectrum {
    let centers = secular_transitions(constants, b_z).sorted();
    let sigma = settings.linewidth;
    let f_lo = centers[0] - 8.0 * sigma;
    let f_hi = centers[3] + 8.0 * sigma;
    let n = settings.points.max(16);
    let step = (f_hi - f_lo) / (n - 1) as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut frequencies = Vec::with_capacity(n);
    let mut pl = Vec::with_capacity(n);
    let mut noise = Vec::with_capacity(n);
    for k in 0..n {
        let f = f_lo + step * k as f64;
        let mut dips = 0.0;
        for &c in &centers {
            let t = (f - c) / sigma;
            dips += (-0.5 * t * t).exp();
        }
        let mean_rate = settings.rate * (1.0 - settings.contrast * dips);
        let counts = if settings.shot_noise {
            let lambda = (mean_rate * settings.integration).max(1e-12);
            Poisson::new(lambda).expect("positive lambda").sample(&mut rng)
        } else {
            mean_rate * settings.integration
        };
        frequencies.push(f);
        pl.push(counts / settings.integration);
        noise.push(counts.max(1.0).sqrt() / settings.integration);
    }

    OdmrSpectrum {
        frequencies,
        pl,
        current,
        noise: settings.shot_noise.then_some(noise),
    }
}

/// Synthesizes a nuclear-oscillation trace: the closed-form signal of the
/// ideal double-swap sequence, 1/2 − (A/2)·sin²(π ω_NO Δt) with contrast
/// A = (γ_I,⊥ B_⊥ / ω_NO)², plus Gaussian noise of the given standard
/// deviation. Spans three oscillation periods with 160 points.
pub fn synth_nutation(
    constants: &SpinConstants,
    b_z: f64,
    b_perp: f64,
    noise: f64,
    current: f64,
    seed: u64,
) -> NutationTrace {
    let f = nuclear_oscillation_frequency(constants, b_z, b_perp).frequency;
    let contrast = if f > 0.0 {
        (constants.gamma_i_perp * b_perp / f).powi(2)
    } else {
        0.0
    };
    let span = if f > 0.0 { 3.0 / f } else { 100e-6 };
    let n = 160;
    let dt = span / (n - 1) as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = Normal::new(0.0, noise.max(0.0)).expect("finite noise");
    let mut delays = Vec::with_capacity(n);
    let mut signal = Vec::with_capacity(n);
    for k in 0..n {
        let t = dt * k as f64;
        let s = 0.5 - 0.5 * contrast * (std::f64::consts::PI * f * t).sin().powi(2);
        let noisy = if noise > 0.0 { s + gauss.sample(&mut rng) } else { s };
        delays.push(t);
        signal.push(noisy);
    }

    NutationTrace {
        delays,
        signal,
        current,
    }
}
