//! Vector-magnetometry localization of a single NV center relative to a
//! current-carrying nanowire.
//!
//! The crate models the NV·¹⁵N spin physics ([`spin_model`]), the field
//! of the rectangular nanowire ([`wire_field`]), turns measured spectra
//! and nutation traces into field-to-current ratios ([`fitting`]),
//! inverts those ratios for the NV position with bootstrap uncertainty
//! ([`locator`]), and derives spin–resonator coupling figures
//! ([`coupling`]). [`io`] holds the CSV/SVG formats shared with the
//! `nvloc` command-line tool.
//!
//! Data-parallel loops (bootstrap, field grids, density maps) run on
//! rayon under the default `parallel` feature and fall back to plain
//! loops without it; results are identical either way.

// Negated float comparisons (`!(x > 0.0)`) are deliberate NaN-rejecting
// validation guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod error;
pub mod fitting;
pub mod grid;
pub mod io;
pub mod locator;
pub mod par;
mod quad;
pub mod spin_model;
pub mod wire_field;

pub use error::{Error, Result};
