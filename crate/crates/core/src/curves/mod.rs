//! Embedded tropical curves: lattice length, ray-direction checks and chart
//! functions that isolate a ray, a segment or a vertex.

mod charts;
mod complex;
mod restrict;

pub use charts::{default_epsilon, dual_covector, ray_bump, segment_tent, vertex_star, Chart, Construction};
pub use complex::{
    check_geometric_conditions, check_ray_directions, int_vertex, lattice_length, CurveComplex, EdgeGeom, EdgeRef,
    GeometricReport,
};
pub use restrict::{EdgeRestriction, PLFunctionOnComplex};
