//! Max-plus Laurent polynomials and rational functions over exact rationals.

mod poly;
mod rational;

pub use poly::{AffineForm, TropicalPoly};
pub use rational::{combine_generators, normalize_pair, TropicalRational};
