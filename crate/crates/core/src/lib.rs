//! Exact dispersion (largest empty axis-parallel box) of point sets on the
//! torus and in the unit square, the three-gap splitting machinery behind
//! the dispersion of integration lattices, and exhaustive searches for
//! lattices of minimal dispersion.
//!
//! All values are exact: coordinates live on a common integer grid and
//! results are [`Rational`]s.

pub mod dispersion;
pub mod error;
pub mod gaps;
pub mod numeric;
pub mod pointset;
pub mod search;
pub mod splitting;

pub use dispersion::{
    box_is_empty, nonperiodic_dispersion_2d, periodic_dispersion, periodic_dispersion_2d,
    periodic_dispersion_nd, Algorithm, DispersionResult, Extent, TorusBox,
};
pub use error::{Error, Result};
pub use numeric::{fib, fib_index, torus_distance, Rational};
pub use pointset::{GridPointSet, LatticeSpec};
