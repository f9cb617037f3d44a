//! Polytope primitives for dimensions two and three: hulls, halfspace
//! conversion, volume, support and gauge functions, linear images.

mod hull2;
mod hull3;
mod point;
mod polytope;

pub use hull2::{clip as clip_polygon, shoelace};
pub use point::{triple, Dim, Matrix, Point};
pub(crate) use polytope::intersect_around_origin;
pub use polytope::{convex_hull, halfspace_to_vertex, intersect_halfspaces_around, BodyFile, Halfspace, Polytope};
