//! Spin–resonator coupling and single-spin detection-time estimates.

use crate::error::{Error, Result};
use crate::spin_model::{sx_matrix_element, SpinConstants};

/// Resonator and detection parameters. Defaults follow the envisioned
/// readout circuit: δi = 35 nA vacuum current fluctuations,
/// κ = γ₂ = 10⁵ s⁻¹, η = 1.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ResonatorParams {
    /// Vacuum current fluctuations, A.
    pub delta_i: f64,
    /// Resonator energy damping rate, 1/s.
    pub kappa: f64,
    /// Spin decoherence rate, 1/s.
    pub gamma2: f64,
    /// Microwave detection efficiency, in (0, 1].
    pub eta: f64,
}

impl Default for ResonatorParams {
    fn default() -> Self {
        ResonatorParams {
            delta_i: 35e-9,
            kappa: 1e5,
            gamma2: 1e5,
            eta: 1.0,
        }
    }
}

impl ResonatorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_i > 0.0 && self.kappa > 0.0 && self.gamma2 > 0.0) {
            return Err(Error::validation("resonator rates must be positive"));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::validation("eta must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Coupling constant in both conventions. Keeping the angular value
/// explicit prevents the (2π)⁴ error in the quartic detection-time
/// formula, which consumes only `g_angular`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CouplingEstimate {
    /// g/2π, Hz.
    pub g_over_2pi: f64,
    /// g, rad/s.
    pub g_angular: f64,
    /// Filled by [`detection_time`], s.
    pub detection_time: Option<f64>,
}

/// g/2π = γ_e · α_⊥ δi · ⟨m_S=0|S_x|m_S=−1⟩, the coupling to the
/// resonator's vacuum field δB₁,⊥ = α_⊥ δi. The matrix element comes
/// from the spin-1 operator, not a hard-coded 1/√2.
pub fn coupling_constant(
    alpha_perp: f64,
    resonator: &ResonatorParams,
    constants: &SpinConstants,
) -> Result<CouplingEstimate> {
    resonator.validate()?;
    if !(alpha_perp >= 0.0) {
        return Err(Error::validation("alpha_perp must be non-negative"));
    }
    let g_over_2pi =
        constants.gamma_e * alpha_perp * resonator.delta_i * sx_matrix_element();
    Ok(CouplingEstimate {
        g_over_2pi,
        g_angular: 2.0 * std::f64::consts::PI * g_over_2pi,
        detection_time: None,
    })
}

/// Single-spin detection time T = κ² γ₂ / (η g⁴) for unit signal-to-noise,
/// with g in angular units.
pub fn detection_time(g: &CouplingEstimate, resonator: &ResonatorParams) -> Result<f64> {
    resonator.validate()?;
    if !(g.g_angular > 0.0) {
        return Err(Error::validation(
            "detection time diverges for zero coupling",
        ));
    }
    Ok(resonator.kappa * resonator.kappa * resonator.gamma2
        / (resonator.eta * g.g_angular.powi(4)))
}

/// Convenience: coupling constant with its detection time attached.
pub fn coupling_with_detection_time(
    alpha_perp: f64,
    resonator: &ResonatorParams,
    constants: &SpinConstants,
) -> Result<CouplingEstimate> {
    let mut g = coupling_constant(alpha_perp, resonator, constants)?;
    if g.g_angular > 0.0 {
        g.detection_time = Some(detection_time(&g, resonator)?);
    }
    Ok(g)
}
