//! Volume products `|K||(K−K)°|` of convex polygons and polyhedra.
//!
//! The crate computes difference bodies, polar bodies, sections and
//! projections of polytopes in two and three dimensions, re-runs the
//! inequality chains behind the lower bounds `3/2` (planar bodies) and `2/3`
//! (bodies with the rotational symmetry of the regular tetrahedron) as
//! checkable certificates, cross-checks volumes with a seeded Monte-Carlo
//! oracle and searches for volume-product minimizers.

pub mod body_ops;
pub mod certificates;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod search;
pub mod shapes;
pub mod symmetry;
pub mod tolerance;

pub use error::{GeomError, Result};
pub use geometry::{Dim, Halfspace, Matrix, Point, Polytope};
