//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input fails a documented precondition (non-hermitian matrix,
    /// non-unit axis, non-positive geometry, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// Field requested on the singular line of the thin-wire model.
    #[error("field point lies on the wire axis (r = 0)")]
    SingularPoint,

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature failed to converge: requested rel. tol {requested:.1e}, achieved {achieved:.1e}")]
    QuadratureFailed { requested: f64, achieved: f64 },

    /// Fewer resolvable extrema than spectral components.
    #[error("under-resolved spectrum: found {found} candidate dips, need {needed}; widen the scan range")]
    UnderResolved { found: usize, needed: usize },

    /// Nonlinear least squares ran out of iterations.
    #[error("fit did not converge after {iterations} iterations (residual norm {residual_norm:.3e})")]
    FitDidNotConverge {
        iterations: usize,
        residual_norm: f64,
    },

    /// Branch means too close to assign ODMR lines to electron branches.
    #[error("branch assignment ambiguous: branch means separated by {separation_hz:.3e} Hz < 2 A_z")]
    AmbiguousBranches { separation_hz: f64 },

    /// Periodogram shows no significant peak.
    #[error("no significant oscillation in trace (peak power {peak:.3e} < 3x median {median:.3e})")]
    NoOscillation { peak: f64, median: f64 },

    /// Inverse formula applied outside its domain.
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),

    /// Too few data points for the requested fit.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// No position reproduces the measured field ratios.
    #[error("no consistent position: best residual {residual:.3e} T/A exceeds {threshold:.3e} T/A")]
    NoConsistentPosition { residual: f64, threshold: f64 },

    /// Measured ratios exceed every value reachable on the search grid.
    #[error("alpha values out of range of the search grid: {0}")]
    OutOfRange(String),

    /// Too many bootstrap draws failed to invert.
    #[error("unstable inversion: {failed} of {total} bootstrap fits failed ({fraction:.1}%)")]
    UnstableInversion {
        failed: usize,
        total: usize,
        fraction: f64,
    },

    /// File could not be parsed.
    #[error("parse error in {file} line {line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
