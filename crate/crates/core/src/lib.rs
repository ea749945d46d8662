//! Exact lattice-polytope toolkit for asymptotic Chow stability of polarized
//! toric varieties.
//!
//! Every quantity is computed exactly: coordinates are machine integers with
//! checked arithmetic, volumes and averages are big rationals.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod catalog;
pub mod ehrhart;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod stability;
pub mod symmetry;
pub mod toricgen;
pub mod triangulation;

pub use error::{Error, Result};
pub use geometry::{Facet, Point, Polytope};
pub use num_rational::BigRational as Rational;
