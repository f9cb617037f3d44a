//! The rotation group of the regular tetrahedron, symmetry tests and the
//! classification of symmetric polyhedra with at most six vertices.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::geometry::{Dim, Matrix, Point, Polytope};
use crate::tolerance::tol_geom;

/// A rotation preserving `{(1,1,-1), (1,-1,1), (-1,1,1), (-1,-1,-1)}`: a signed
/// permutation matrix with determinant one.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    m: [[i8; 3]; 3],
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { m: [[1, 0, 0], [0, 1, 0], [0, 0, 1]] };
    /// `(x, y, z) ↦ (y, z, x)`
    pub const CYCLE: GroupElement = GroupElement { m: [[0, 1, 0], [0, 0, 1], [1, 0, 0]] };

    pub fn rows(&self) -> [[i8; 3]; 3] {
        self.m
    }

    fn diag(a: i8, b: i8, c: i8) -> Self {
        GroupElement { m: [[a, 0, 0], [0, b, 0], [0, 0, c]] }
    }

    pub fn apply(&self, p: &Point) -> Point {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| f64::from(self.m[i][j]) * p.0[j]).sum();
        }
        Point(out)
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut r = [[0i8; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        GroupElement { m: r }
    }

    pub fn transpose(&self) -> GroupElement {
        let mut r = [[0i8; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[j][i];
            }
        }
        GroupElement { m: r }
    }

    pub fn det(&self) -> i32 {
        let m = self.m.map(|r| r.map(i32::from));
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows3(self.m.map(|r| r.map(f64::from)))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m)
    }
}

/// The twelve rotations: the identity, the three half-turns about the
/// coordinate axes, and the eight third-turns about the body diagonals.
pub fn tetrahedral_group() -> &'static [GroupElement] {
    static GROUP: OnceLock<Vec<GroupElement>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let signs = [
            GroupElement::IDENTITY,
            GroupElement::diag(1, -1, -1),
            GroupElement::diag(-1, 1, -1),
            GroupElement::diag(-1, -1, 1),
        ];
        let cycle2 = GroupElement::CYCLE.compose(&GroupElement::CYCLE);
        let mut out = Vec::with_capacity(12);
        for perm in [GroupElement::IDENTITY, GroupElement::CYCLE, cycle2] {
            for s in &signs {
                out.push(s.compose(&perm));
            }
        }
        out
    })
}

/// Greedy nearest-neighbour matching of two point sets at distance `thr`.
fn matches_within(a: &[Point], b: &[Point], thr: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for p in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, p.dist(q)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((j, d)) if d <= thr => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// Whether every rotation of the group maps the vertex set onto itself, up
/// to `tol` times the bounding-box diameter.
pub fn is_tetrahedrally_symmetric(k: &Polytope, tol: f64) -> bool {
    if k.dim() != Dim::Three {
        return false;
    }
    let thr = tol * k.diameter();
    let v = k.vertices();
    tetrahedral_group().iter().all(|g| {
        let image: Vec<Point> = v.iter().map(|p| g.apply(p)).collect();
        matches_within(&image, v, thr)
    })
}

/// Distinct images of `p` under the group.
pub fn orbit(p: &Point) -> Vec<Point> {
    let thr = tol_geom() * (1.0 + p.norm());
    let mut out: Vec<Point> = Vec::with_capacity(12);
    for g in tetrahedral_group() {
        let q = g.apply(p);
        if !out.iter().any(|o| o.dist(&q) <= thr) {
            out.push(q);
        }
    }
    out
}

/// Convex hull of the union of the generators' orbits.
pub fn symmetrize_orbit(generators: &[Point]) -> Result<Polytope> {
    if generators.is_empty() {
        return Err(GeomError::DegenerateInput("no generators".into()));
    }
    let pts: Vec<Point> = tetrahedral_group().iter().flat_map(|g| generators.iter().map(move |p| g.apply(p))).collect();
    Polytope::hull(&pts, Dim::Three)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryClass {
    Tetrahedron,
    Octahedron,
    Other,
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymmetryClass::Tetrahedron => "Tetrahedron",
            SymmetryClass::Octahedron => "Octahedron",
            SymmetryClass::Other => "Other",
        };
        f.write_str(s)
    }
}

/// Combinatorial type of a symmetric polyhedron with few vertices.
///
/// Up to six vertices the vertex set must be a single orbit, either of a
/// point `(p, ±p, ±p)` (four vertices) or of `p·e₁` (six vertices). Any other
/// configuration contradicts the orbit structure of the group and is reported
/// as an invariant violation; in particular five vertices are impossible.
pub fn classify_low_vertex_symmetric(k: &Polytope) -> Result<SymmetryClass> {
    if !is_tetrahedrally_symmetric(k, tol_geom()) {
        return Err(GeomError::NotSymmetric);
    }
    let v = k.vertices();
    if v.len() > 6 {
        return Ok(SymmetryClass::Other);
    }
    let eps = k.eps();
    match v.len() {
        4 => {
            let diagonal = v.iter().all(|p| {
                let a = p.0.map(f64::abs);
                (a[0] - a[1]).abs() <= eps && (a[1] - a[2]).abs() <= eps && a[0] > eps
            });
            if diagonal {
                return Ok(SymmetryClass::Tetrahedron);
            }
        }
        6 => {
            let r = v[0].norm();
            let axial = v.iter().all(|p| {
                let nonzero = p.0.iter().filter(|c| c.abs() > eps).count();
                nonzero == 1 && (p.norm() - r).abs() <= eps
            });
            if axial {
                return Ok(SymmetryClass::Octahedron);
            }
        }
        _ => {}
    }
    Err(GeomError::InvariantViolation(format!(
        "symmetric polyhedron with {} vertices is neither a tetrahedron nor an octahedron",
        v.len()
    )))
}

/// Partition of a point set into orbits of the cyclic group generated by `g`.
pub fn orbit_decomposition(points: &[Point], g: &GroupElement) -> Result<Vec<Vec<Point>>> {
    let diameter = points.iter().flat_map(|p| points.iter().map(move |q| p.dist(q))).fold(0.0, f64::max);
    let thr = tol_geom() * (1.0 + diameter);
    let find = |q: &Point| points.iter().position(|p| p.dist(q) <= thr);
    let mut seen = vec![false; points.len()];
    let mut out = Vec::new();
    for start in 0..points.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![points[start]];
        seen[start] = true;
        let mut cur = g.apply(&points[start]);
        loop {
            let j = find(&cur).ok_or(GeomError::NotClosed)?;
            if j == start {
                break;
            }
            if seen[j] {
                return Err(GeomError::NotClosed);
            }
            seen[j] = true;
            cycle.push(points[j]);
            cur = g.apply(&points[j]);
        }
        out.push(cycle);
    }
    Ok(out)
}
