//! Exact half-plane connection probabilities at the percolation point.
//!
//! Every correlator is evaluated with unit amplitude: the nonuniversal
//! proportionality constants are set to one, so only the shape dependence
//! remains. The factorization residuals are then geometry independent and
//! equal to simple powers of two, while the universal constants `C1..C4`
//! are what survives in measured lattice ratios.

mod constants;
mod correlators;
mod geometry;
mod mobius;

pub use constants::{gamma_one_third, universal_constants, UniversalConstants, GAMMA_ONE_THIRD};
pub use correlators::{
    p_anchor_bulk, p_boundary_pair, p_bulk, p_complement_bulk, p_interval_bulk, p_pair_bulk,
    residuals, Residuals, EXPECTED_RESIDUALS,
};
pub use geometry::{
    cross_ratio, sin_zeta_closed_form, zeta, AnchorGeometry, BoundaryPoint, BulkPoint,
    SubtendedAngle,
};
pub use mobius::{mobius_apply, MobiusMap};

/// Boundary exponent of the anchor operator pair, `2 h` with `h = 1/3`.
pub(crate) const ANCHOR_PAIR_EXPONENT: f64 = 2.0 / 3.0;
/// Bulk density exponent `2 h` with `h = 5/96`, doubled by the image charge.
pub(crate) const BULK_EXPONENT: f64 = 5.0 / 48.0;
