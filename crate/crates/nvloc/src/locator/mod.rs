//! Inverse problem: NV position from measured field-to-current ratios,
//! with bootstrap uncertainty, density maps and array statistics.

mod density;
mod position;

pub use density::{marching_squares, mass_level, position_pdf, Bandwidth, ContourLine, PositionPdf};
pub use position::{
    array_statistics, bootstrap_draw, bootstrap_positions, fit_position, summarize,
    AlphaMeasurement, BootstrapSamples, GeometryPrior, HalfPlane, LocalizationMode,
    MirrorSolution, PositionEstimate, PositionFit, SEARCH_X_MAX_M, SEARCH_Z_MAX_M,
    SEARCH_Z_MIN_M,
};
