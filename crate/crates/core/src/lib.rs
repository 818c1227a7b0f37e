//! Critical percolation correlation laboratory.
//!
//! [`theory`] evaluates the exact half-plane connection probabilities of
//! critical percolation and the factorization identities relating them.
//! [`lattice`], [`estimator`] and [`analysis`] measure the same quantities
//! with site percolation on a square lattice and compare the resulting
//! amplitude ratios with the universal constants.

pub mod analysis;
pub mod error;
pub mod estimator;
pub mod lattice;
pub mod theory;

pub use error::{Error, Result};

/// Site percolation threshold of the square lattice.
pub const SITE_PC: f64 = 0.5927463;
