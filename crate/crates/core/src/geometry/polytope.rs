use serde::{Deserialize, Serialize};

use super::hull2::{monotone_chain, shoelace};
use super::hull3::quickhull;
use super::point::{Dim, Matrix, Point};
use crate::error::{GeomError, Result};
use crate::tolerance::{scaled_tol, tol_geom};

/// Closed halfspace `{x : normal·x <= offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Point, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.normal.dot(x) <= self.offset + tol * self.normal.norm()
    }
}

/// A full-dimensional convex polytope in R² or R³.
///
/// Vertices are extreme points in canonical order (counterclockwise from the
/// lexicographic minimum in the plane, lexicographic in space). Facets are
/// computed at construction and carry unit normals.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: Dim,
    vertices: Vec<Point>,
    facets: Vec<Halfspace>,
    volume: f64,
    diameter: f64,
}

fn bbox_diameter(points: &[Point]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for i in 0..3 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    (0..3).map(|i| (hi[i] - lo[i]).powi(2)).sum::<f64>().sqrt()
}

impl Polytope {
    /// Convex hull of a point set.
    pub fn hull(points: &[Point], dim: Dim) -> Result<Self> {
        if points.len() < dim.n() + 1 {
            return Err(GeomError::DegenerateInput(format!(
                "{} points cannot span dimension {}",
                points.len(),
                dim.n()
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(GeomError::InvalidArgument(format!("non-finite coordinate in {p:?}")));
        }
        let pts: Vec<Point> = match dim {
            Dim::Two => points.iter().map(|p| Point::new2(p.x(), p.y())).collect(),
            Dim::Three => points.to_vec(),
        };
        let diameter = bbox_diameter(&pts);
        let eps = scaled_tol(diameter);
        match dim {
            Dim::Two => {
                let vertices = monotone_chain(&pts, eps);
                let volume = shoelace(&vertices);
                if vertices.len() < 3 || volume <= eps * diameter {
                    return Err(GeomError::DegenerateInput("points are collinear".into()));
                }
                let n = vertices.len();
                let facets = (0..n)
                    .map(|i| {
                        let a = vertices[i];
                        let b = vertices[(i + 1) % n];
                        let normal = Point::new2(b.y() - a.y(), a.x() - b.x()).normalized();
                        Halfspace::new(normal, normal.dot(&a))
                    })
                    .collect();
                let diameter = bbox_diameter(&vertices);
                Ok(Polytope { dim, vertices, facets, volume, diameter })
            }
            Dim::Three => {
                let h = quickhull(&pts, eps).ok_or_else(|| GeomError::DegenerateInput("points are coplanar".into()))?;
                if h.volume <= eps * diameter * diameter {
                    return Err(GeomError::DegenerateInput("hull has no volume".into()));
                }
                let facets = h.facets.iter().map(|&(n, o)| Halfspace::new(n, o)).collect();
                let diameter = bbox_diameter(&h.vertices);
                Ok(Polytope { dim, vertices: h.vertices, facets, volume: h.volume, diameter })
            }
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// Lebesgue measure (area in the plane).
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Diameter of the axis-aligned bounding box of the vertices.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Absolute geometric tolerance at this body's scale.
    pub fn eps(&self) -> f64 {
        scaled_tol(self.diameter)
    }

    pub fn centroid_of_vertices(&self) -> Point {
        let sum = self.vertices.iter().fold(Point::ORIGIN, |acc, v| acc + *v);
        sum / self.vertices.len() as f64
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point([f64::INFINITY; 3]);
        let mut hi = Point([f64::NEG_INFINITY; 3]);
        for v in &self.vertices {
            for i in 0..self.dim.n() {
                lo.0[i] = lo.0[i].min(v[i]);
                hi.0[i] = hi.0[i].max(v[i]);
            }
        }
        if self.dim == Dim::Two {
            lo.0[2] = 0.0;
            hi.0[2] = 0.0;
        }
        (lo, hi)
    }

    /// `max_v ⟨u, v⟩` over the vertices.
    pub fn support_value(&self, u: &Point) -> Result<f64> {
        self.check_direction(u)?;
        Ok(self.vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max))
    }

    /// First vertex in canonical order attaining the support value.
    pub fn support_point(&self, u: &Point) -> Result<Point> {
        let h = self.support_value(u)?;
        let tol = tol_geom() * u.norm() * (1.0 + self.diameter);
        Ok(*self.vertices.iter().find(|v| v.dot(u) >= h - tol).expect("maximum is attained"))
    }

    fn check_direction(&self, u: &Point) -> Result<()> {
        if u.coords(self.dim).iter().all(|&c| c == 0.0) || !u.is_finite() {
            return Err(GeomError::ZeroDirection);
        }
        Ok(())
    }

    /// Whether the origin lies strictly inside.
    pub fn has_interior_origin(&self) -> bool {
        let eps = self.eps();
        self.facets.iter().all(|f| f.offset > eps)
    }

    /// Minkowski functional: the least `t >= 0` with `x ∈ tP`.
    pub fn gauge(&self, x: &Point) -> Result<f64> {
        if !self.has_interior_origin() {
            return Err(GeomError::OriginNotInterior);
        }
        let g = self.facets.iter().map(|f| f.normal.dot(x) / f.offset).fold(0.0, f64::max);
        Ok(g)
    }

    /// Membership with every facet constraint relaxed by `tol`.
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.facets.iter().all(|f| f.contains(x, tol))
    }

    /// Image under an invertible linear map.
    pub fn apply_linear(&self, m: &Matrix) -> Result<Polytope> {
        if m.dim() != self.dim {
            return Err(GeomError::DimensionMismatch { expected: self.dim.n(), got: m.dim().n() });
        }
        let d = m.det();
        if !(d.abs() > tol_geom()) {
            return Err(GeomError::SingularMatrix(d));
        }
        let pts: Vec<Point> = self.vertices.iter().map(|v| m.apply(v)).collect();
        Polytope::hull(&pts, self.dim)
    }

    pub fn translate(&self, t: &Point) -> Result<Polytope> {
        let pts: Vec<Point> = self.vertices.iter().map(|v| *v + *t).collect();
        Polytope::hull(&pts, self.dim)
    }

    pub fn scale(&self, s: f64) -> Result<Polytope> {
        self.apply_linear(&Matrix::scalar(self.dim, s))
    }

    /// Halfspace description of the facets.
    pub fn to_halfspaces(&self) -> Vec<Halfspace> {
        self.facets.clone()
    }

    /// Polytope with the same vertex set, compared with a nearest-neighbour
    /// bijection at tolerance `tol` (relative to the diameter).
    pub fn same_vertex_set(&self, other: &Polytope, tol: f64) -> bool {
        if self.dim != other.dim || self.vertices.len() != other.vertices.len() {
            return false;
        }
        let thr = tol * (1.0 + self.diameter.max(other.diameter));
        let mut used = vec![false; other.vertices.len()];
        for v in &self.vertices {
            let best = other
                .vertices
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, w)| (j, v.dist(w)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((j, d)) if d <= thr => used[j] = true,
                _ => return false,
            }
        }
        true
    }
}

/// Convex hull of a point set.
pub fn convex_hull(points: &[Point], dim: Dim) -> Result<Polytope> {
    Polytope::hull(points, dim)
}

/// Vertices of `{x : normal·x <= offset}` when every offset is positive: the
/// dual hull of `normal/offset` has facets `c·y <= d`, and the intersection's
/// vertices are the points `c/d`.
fn dual_vertices(h: &[Halfspace], dim: Dim) -> Result<Vec<Point>> {
    let dual: Vec<Point> = h.iter().map(|f| f.normal / f.offset).collect();
    let hull = Polytope::hull(&dual, dim).map_err(|_| GeomError::UnboundedRegion)?;
    if !hull.has_interior_origin() {
        return Err(GeomError::UnboundedRegion);
    }
    Ok(hull.facets.iter().map(|f| f.normal / f.offset).collect())
}

pub(crate) fn intersect_around_origin(h: &[Halfspace], dim: Dim) -> Result<Polytope> {
    Polytope::hull(&dual_vertices(h, dim)?, dim)
}

/// Intersection of halfspaces, given a point strictly inside all of them.
pub fn intersect_halfspaces_around(h: &[Halfspace], dim: Dim, interior: &Point) -> Result<Polytope> {
    let shifted: Vec<Halfspace> = h
        .iter()
        .map(|f| {
            let norm = f.normal.norm();
            Halfspace::new(f.normal / norm, (f.offset - f.normal.dot(interior)) / norm)
        })
        .collect();
    if shifted.iter().any(|f| !(f.offset > 0.0)) {
        return Err(GeomError::InvalidArgument("point is not strictly interior".into()));
    }
    let pts: Vec<Point> = dual_vertices(&shifted, dim)?.into_iter().map(|p| p + *interior).collect();
    Polytope::hull(&pts, dim)
}

fn normals_bounded(h: &[Halfspace], dim: Dim) -> bool {
    // Bounded iff the unit normals surround the origin.
    let normals: Vec<Point> = h.iter().map(|f| f.normal.normalized()).collect();
    match Polytope::hull(&normals, dim) {
        Ok(p) => p.facets.iter().all(|f| f.offset > 1e-12),
        Err(_) => false,
    }
}

/// Vertex enumeration of `{x : normal·x <= offset}`.
pub fn halfspace_to_vertex(h: &[Halfspace], dim: Dim) -> Result<Polytope> {
    if h.iter().any(|f| f.normal.coords(dim).iter().all(|&c| c == 0.0)) {
        return Err(GeomError::InvalidArgument("halfspace with zero normal".into()));
    }
    if !normals_bounded(h, dim) {
        return Err(GeomError::UnboundedRegion);
    }
    if h.iter().all(|f| f.offset > tol_geom() * f.normal.norm()) {
        return intersect_around_origin(h, dim);
    }
    // General position: enumerate intersections of dim-tuples of boundaries.
    let n = dim.n();
    let mut candidates = Vec::new();
    let idx: Vec<usize> = (0..h.len()).collect();
    let mut push_if_feasible = |x: Point| {
        if h.iter().all(|f| f.contains(&x, tol_geom())) {
            candidates.push(x);
        }
    };
    match n {
        2 => {
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    let m =
                        Matrix::from_rows2([[h[i].normal.x(), h[i].normal.y()], [h[j].normal.x(), h[j].normal.y()]]);
                    if let Some(inv) = m.inverse(1e-14) {
                        push_if_feasible(inv.apply(&Point::new2(h[i].offset, h[j].offset)));
                    }
                }
            }
        }
        _ => {
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate().skip(a + 1) {
                    for &k in &idx[b + 1..] {
                        let m = Matrix::from_rows3([h[i].normal.0, h[j].normal.0, h[k].normal.0]);
                        if let Some(inv) = m.inverse(1e-14) {
                            push_if_feasible(inv.apply(&Point::new3(h[i].offset, h[j].offset, h[k].offset)));
                        }
                    }
                }
            }
        }
    }
    if candidates.is_empty() {
        return Err(GeomError::EmptyRegion);
    }
    Polytope::hull(&candidates, dim).map_err(|_| GeomError::EmptyRegion)
}

/// Serialized body: `{"dim": 2|3, "vertices": [[x, y(, z)], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BodyFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl BodyFile {
    pub fn from_polytope(p: &Polytope) -> Self {
        BodyFile { dim: p.dim.n(), vertices: p.vertices.iter().map(|v| v.coords(p.dim).to_vec()).collect() }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        let dim = Dim::from_n(self.dim)?;
        let pts = self
            .vertices
            .iter()
            .map(|c| {
                if c.len() != dim.n() {
                    Err(GeomError::DimensionMismatch { expected: dim.n(), got: c.len() })
                } else {
                    Point::from_slice(c)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Polytope::hull(&pts, dim)
    }
}
