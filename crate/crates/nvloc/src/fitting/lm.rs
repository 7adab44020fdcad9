//! Damped least squares with analytic Jacobians.
//!
//! Shared engine for the Gaussian-quadruplet and sinusoid model fits.
//! Convergence follows the usual orthogonality criterion: the fit stops
//! once every component of Jᵀr, scaled by its column and residual norms,
//! drops below `gtol`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A residual model with analytic Jacobian.
pub trait LeastSquaresModel {
    fn residual_count(&self) -> usize;
    fn parameter_count(&self) -> usize;
    /// Fill `r` with residuals model(x_i; p) − y_i (optionally weighted).
    fn residuals(&self, params: &[f64], r: &mut DVector<f64>);
    /// Fill `j` with ∂r_i/∂p_j.
    fn jacobian(&self, params: &[f64], j: &mut DMatrix<f64>);
}

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iterations: usize,
    pub gtol: f64,
    pub ftol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 200,
            gtol: 1e-8,
            ftol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmFit {
    pub params: Vec<f64>,
    /// Euclidean norm of the residual vector at the solution.
    pub residual_norm: f64,
    /// Standard errors from the scaled covariance s²(JᵀJ)⁻¹; NaN when the
    /// normal matrix is singular at the solution.
    pub standard_errors: Vec<f64>,
    pub iterations: usize,
}

/// Minimize ½‖r(p)‖² from `x0`.
pub fn fit(model: &dyn LeastSquaresModel, x0: &[f64], opts: &LmOptions) -> Result<LmFit> {
    let n = model.residual_count();
    let np = model.parameter_count();
    assert_eq!(x0.len(), np, "initial guess has wrong length");
    if n < np {
        return Err(Error::InsufficientData(format!(
            "{n} residuals cannot constrain {np} parameters"
        )));
    }

    let mut p = x0.to_vec();
    let mut r = DVector::zeros(n);
    let mut j = DMatrix::zeros(n, np);
    model.residuals(&p, &mut r);
    let mut cost = r.norm_squared();

    let mut lambda = 1e-3;
    let mut iterations = 0;

    loop {
        model.jacobian(&p, &mut j);
        let grad = j.transpose() * &r;
        let rnorm = cost.sqrt();

        // Orthogonality convergence test.
        let mut gmax = 0.0f64;
        for k in 0..np {
            let cnorm = j.column(k).norm();
            if cnorm > 0.0 && rnorm > 0.0 {
                gmax = gmax.max(grad[k].abs() / (cnorm * rnorm));
            }
        }
        if gmax <= opts.gtol || rnorm == 0.0 {
            return Ok(finish(model, &p, rnorm, &j, n, np, iterations));
        }
        if iterations >= opts.max_iterations {
            return Err(Error::FitDidNotConverge {
                iterations,
                residual_norm: rnorm,
            });
        }
        iterations += 1;

        let jtj = j.transpose() * &j;
        let mut accepted = false;
        for _ in 0..40 {
            let mut damped = jtj.clone();
            for k in 0..np {
                let d = jtj[(k, k)];
                damped[(k, k)] = d + lambda * d.max(1e-30);
            }
            let Some(chol) = damped.cholesky() else {
                lambda = (lambda * 4.0).min(1e14);
                continue;
            };
            let step = chol.solve(&(-&grad));
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let mut r_trial = DVector::zeros(n);
            model.residuals(&trial, &mut r_trial);
            let trial_cost = r_trial.norm_squared();
            if trial_cost.is_finite() && trial_cost < cost {
                let improvement = (cost - trial_cost) / cost.max(1e-300);
                p = trial;
                r = r_trial;
                cost = trial_cost;
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if improvement < opts.ftol {
                    model.jacobian(&p, &mut j);
                    return Ok(finish(model, &p, cost.sqrt(), &j, n, np, iterations));
                }
                break;
            }
            lambda = (lambda * 4.0).min(1e14);
        }
        if !accepted {
            // Damping saturated: no descent direction exists within float
            // precision, so the current point is a stationary point.
            return Ok(finish(model, &p, cost.sqrt(), &j, n, np, iterations));
        }
    }
}

fn finish(
    model: &dyn LeastSquaresModel,
    p: &[f64],
    residual_norm: f64,
    j_prev: &DMatrix<f64>,
    n: usize,
    np: usize,
    iterations: usize,
) -> LmFit {
    let mut j = j_prev.clone();
    model.jacobian(p, &mut j);
    let jtj = j.transpose() * &j;
    let dof = n.saturating_sub(np);
    let s2 = if dof > 0 {
        residual_norm * residual_norm / dof as f64
    } else {
        0.0
    };
    let standard_errors = match jtj.try_inverse() {
        Some(cov) => (0..np).map(|k| (s2 * cov[(k, k)]).max(0.0).sqrt()).collect(),
        None => vec![f64::NAN; np],
    };
    LmFit {
        params: p.to_vec(),
        residual_norm,
        standard_errors,
        iterations,
    }
}
