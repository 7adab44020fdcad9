//! Straight-line fits with standard errors.

use crate::error::{Error, Result};

/// Result of a (weighted) ordinary least-squares line fit y = slope·x + b.
///
/// Units follow the inputs; for the α extractions the slope is in T/A.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub intercept_stderr: f64,
    /// √(Σ w r²), the weighted residual norm.
    pub residual_norm: f64,
    pub n_points: usize,
}

/// Ordinary or inverse-variance-weighted least squares.
///
/// `weights`, when given, are 1/σ² per point. Standard errors come from
/// the covariance scaled by the reduced chi-square (zero when there are
/// no residual degrees of freedom).
pub fn linear_fit(x: &[f64], y: &[f64], weights: Option<&[f64]>) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::validation("x and y lengths differ"));
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 points for a line fit, got {}",
            x.len()
        )));
    }
    if let Some(w) = weights {
        if w.len() != x.len() || w.iter().any(|&wi| !(wi > 0.0)) {
            return Err(Error::validation("weights must be positive, one per point"));
        }
    }
    let w_of = |i: usize| weights.map_or(1.0, |w| w[i]);

    let sw: f64 = (0..x.len()).map(w_of).sum();
    let sx: f64 = (0..x.len()).map(|i| w_of(i) * x[i]).sum();
    let sy: f64 = (0..x.len()).map(|i| w_of(i) * y[i]).sum();
    let xbar = sx / sw;
    let ybar = sy / sw;
    let sxx: f64 = (0..x.len()).map(|i| w_of(i) * (x[i] - xbar).powi(2)).sum();
    if sxx <= 0.0 || !sxx.is_finite() {
        return Err(Error::InsufficientData(
            "all x values identical; slope is undetermined".into(),
        ));
    }
    let sxy: f64 = (0..x.len())
        .map(|i| w_of(i) * (x[i] - xbar) * (y[i] - ybar))
        .sum();

    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;

    let ss_res: f64 = (0..x.len())
        .map(|i| w_of(i) * (y[i] - slope * x[i] - intercept).powi(2))
        .sum();
    let dof = x.len().saturating_sub(2);
    let s2 = if dof > 0 { ss_res / dof as f64 } else { 0.0 };

    Ok(LinearFit {
        slope,
        slope_stderr: (s2 / sxx).sqrt(),
        intercept_stderr: (s2 * (1.0 / sw + xbar * xbar / sxx)).sqrt(),
        intercept,
        residual_norm: ss_res.max(0.0).sqrt(),
        n_points: x.len(),
    })
}
