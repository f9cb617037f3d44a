//! Body-level constructions: difference body, polar body, planar projections
//! and central sections of solids, planar Steiner symmetrization, and the
//! volume product `|K||(K−K)°|`.

use crate::error::{GeomError, Result};
use crate::geometry::{intersect_around_origin, Dim, Halfspace, Point, Polytope};

/// Orthonormal basis `(e1, e2)` of the plane `u⊥`, with `(e1, e2, u/|u|)`
/// right-handed.
#[derive(Debug, Clone, Copy)]
pub struct PlaneBasis {
    pub u: Point,
    pub e1: Point,
    pub e2: Point,
}

impl PlaneBasis {
    pub fn new(u: Point) -> Result<Self> {
        let len = u.norm();
        if !(len > 0.0) || !u.is_finite() {
            return Err(GeomError::ZeroDirection);
        }
        let uh = u / len;
        let axes = [Point::new3(1.0, 0.0, 0.0), Point::new3(0.0, 1.0, 0.0), Point::new3(0.0, 0.0, 1.0)];
        let a = axes
            .iter()
            .find(|a| uh.cross(a).norm() > 1e-6_f64.sin())
            .expect("some axis is not parallel to a unit vector");
        let e1 = uh.cross(a).normalized();
        let e2 = uh.cross(&e1).normalized();
        Ok(PlaneBasis { u, e1, e2 })
    }

    /// Coordinates of `x` in the plane basis (drops the `u` component).
    pub fn to_plane(&self, x: &Point) -> Point {
        Point::new2(x.dot(&self.e1), x.dot(&self.e2))
    }

    /// Embeds planar coordinates back into space.
    pub fn from_plane(&self, p: &Point) -> Point {
        self.e1 * p.x() + self.e2 * p.y()
    }
}

/// `K − K`, the hull of all pairwise vertex differences.
pub fn difference_body(k: &Polytope) -> Polytope {
    let v = k.vertices();
    let mut pts = Vec::with_capacity(v.len() * v.len());
    for a in v {
        for b in v {
            pts.push(*a - *b);
        }
    }
    Polytope::hull(&pts, k.dim()).expect("difference body of a full-dimensional body is full-dimensional")
}

/// Polar body `{x : ⟨y, x⟩ <= 1 for all y ∈ K}`.
///
/// The constraints are the vertices of `K`; their intersection has one vertex
/// per facet `a·x <= b` of `K`, namely `a/b`.
pub fn polar(k: &Polytope) -> Result<Polytope> {
    if !k.has_interior_origin() {
        return Err(GeomError::OriginNotInterior);
    }
    let pts: Vec<Point> = k.facets().iter().map(|f| f.normal / f.offset).collect();
    Polytope::hull(&pts, k.dim())
}

fn require_solid(k: &Polytope) -> Result<()> {
    if k.dim() != Dim::Three {
        return Err(GeomError::DimensionMismatch { expected: 3, got: k.dim().n() });
    }
    Ok(())
}

/// Orthogonal projection onto `u⊥`, in `(e1, e2)` coordinates.
pub fn project(k: &Polytope, basis: &PlaneBasis) -> Result<Polytope> {
    require_solid(k)?;
    let pts: Vec<Point> = k.vertices().iter().map(|v| basis.to_plane(v)).collect();
    Polytope::hull(&pts, Dim::Two)
}

/// Central section `K ∩ u⊥`, in `(e1, e2)` coordinates.
pub fn central_section(k: &Polytope, basis: &PlaneBasis) -> Result<Polytope> {
    require_solid(k)?;
    if !k.has_interior_origin() {
        return Err(GeomError::OriginNotInterior);
    }
    // Facets parallel to the plane project to a zero normal and never bind.
    let planar: Vec<Halfspace> = k
        .facets()
        .iter()
        .map(|f| Halfspace::new(basis.to_plane(&f.normal), f.offset))
        .filter(|h| h.normal.norm() > 1e-12)
        .collect();
    intersect_around_origin(&planar, Dim::Two)
}

/// Steiner symmetrization of a polygon: every chord parallel to `direction` is
/// slid along itself until its midpoint lies on the line through the origin
/// orthogonal to `direction`.
pub fn steiner_symmetrize_2d(p: &Polytope, direction: &Point) -> Result<Polytope> {
    if p.dim() != Dim::Two {
        return Err(GeomError::DimensionMismatch { expected: 2, got: p.dim().n() });
    }
    let d = Point::new2(direction.x(), direction.y());
    if !(d.norm() > 0.0) {
        return Err(GeomError::ZeroDirection);
    }
    let along = d.normalized();
    let across = along.perp();
    // Chord length is piecewise linear between the vertex positions, so the
    // symmetral is the hull of the half-chords erected there.
    let mut pts = Vec::with_capacity(2 * p.vertices().len());
    for v in p.vertices() {
        let s = v.dot(&across);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for f in p.facets() {
            let rate = f.normal.dot(&along);
            let room = f.offset - s * f.normal.dot(&across);
            if rate > 1e-15 {
                hi = hi.min(room / rate);
            } else if rate < -1e-15 {
                lo = lo.max(room / rate);
            }
        }
        let half = ((hi - lo) * 0.5).max(0.0);
        pts.push(across * s + along * half);
        pts.push(across * s - along * half);
    }
    Polytope::hull(&pts, Dim::Two)
}

/// `(K − K)°`
pub fn difference_polar(k: &Polytope) -> Polytope {
    polar(&difference_body(k)).expect("a difference body contains the origin in its interior")
}

/// `|K| · |(K − K)°|`
pub fn volume_product(k: &Polytope) -> f64 {
    k.volume() * difference_polar(k).volume()
}
