//! Certified approximation of filled Julia sets of complex polynomials.
//!
//! Everything here is exact dyadic arithmetic plus outward-rounded interval
//! enclosures; a set reported as certified carries a proof, not a heuristic.
//! The crate is `no_std` (with `alloc`) when built without the `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cellset;
pub mod dyadic;
pub mod error;
pub mod inner;
pub mod interval;
pub mod orbit;
pub mod outer;
mod par;
pub mod periodic;
pub mod poly;
pub mod render;
pub mod roots;
mod seed;
pub mod transcendental;

pub use dyadic::{dyadic_round, Dyadic, DyadicComplex, DyadicError};
pub use error::{Error, Result};
pub use interval::{box_point_distance, ComplexBox, Interval};
pub use poly::{derivative, eval_enclosure, iterate_map_poly, Coefficient, PolynomialOracle, PreparedPoly};
pub use transcendental::RotationAngle;
