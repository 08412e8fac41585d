//! Exact computational tools for tropical rational functions and the
//! congruences they generate.
//!
//! Scalars are arbitrary precision rationals extended by `−∞`. Polyhedra use
//! integer normals and rational offsets, so every membership, emptiness and
//! dominance question is decided exactly.

pub mod congruence;
pub mod curves;
pub mod error;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod polyhedra;
pub mod sampling;
pub mod scalar;
pub mod tropical;

pub use congruence::{CongruencePair, GeneratorCertificate, KPrime};
pub use curves::CurveComplex;
pub use error::{Error, Result};
pub use scalar::{ExtendedRational, Q};
pub use polyhedra::{ConeV, HalfSpace, PolyhedralUnion, Polyhedron};
pub use tropical::{AffineForm, TropicalPoly, TropicalRational};
