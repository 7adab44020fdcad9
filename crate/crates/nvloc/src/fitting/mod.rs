//! Turns raw data series into physical quantities: four-Gaussian ODMR
//! fits → B_z per current → α_z, and sinusoid nutation fits → B_⊥ per
//! current → α_⊥, with seed-deterministic synthetic generators as
//! round-trip oracles.

mod linear;
mod lm;
mod nutation;
mod odmr;
mod synth;

pub use linear::{linear_fit, LinearFit};
pub use nutation::{
    bperp_from_omega, extract_alpha_perp, fit_sinusoid, periodogram, AlphaPerpModel,
    NutationTrace, SinusoidFit,
};
pub use odmr::{
    bz_from_centers, extract_alpha_z, fit_four_gaussians, GaussianComponent, GaussianQuadruplet,
    OdmrSpectrum,
};
pub use synth::{synth_nutation, synth_odmr, OdmrSynthSettings};
