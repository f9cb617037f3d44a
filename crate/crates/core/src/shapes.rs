//! Reference bodies used throughout tests, examples and the CLI.

use std::f64::consts::PI;

use crate::geometry::{Dim, Point, Polytope};

/// `conv{(0,0), (1,0), (0,1)}`
pub fn unit_triangle() -> Polytope {
    Polytope::hull(&[Point::new2(0.0, 0.0), Point::new2(1.0, 0.0), Point::new2(0.0, 1.0)], Dim::Two).expect("triangle")
}

/// `[-1, 1]²`
pub fn square() -> Polytope {
    let pts: Vec<Point> =
        [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)].iter().map(|&(x, y)| Point::new2(x, y)).collect();
    Polytope::hull(&pts, Dim::Two).expect("square")
}

/// Regular `n`-gon inscribed in the unit circle with a vertex at `(1, 0)`.
pub fn regular_polygon(n: usize) -> Polytope {
    let pts: Vec<Point> = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            Point::new2(t.cos(), t.sin())
        })
        .collect();
    Polytope::hull(&pts, Dim::Two).expect("regular polygon")
}

/// The tetrahedron `conv{(1,1,-1), (1,-1,1), (-1,1,1), (-1,-1,-1)}`.
pub fn tetrahedron() -> Polytope {
    Polytope::hull(&tetrahedron_vertices(), Dim::Three).expect("tetrahedron")
}

pub fn tetrahedron_vertices() -> [Point; 4] {
    [
        Point::new3(1.0, 1.0, -1.0),
        Point::new3(1.0, -1.0, 1.0),
        Point::new3(-1.0, 1.0, 1.0),
        Point::new3(-1.0, -1.0, -1.0),
    ]
}

/// `[-1, 1]³`
pub fn cube() -> Polytope {
    let mut pts = Vec::with_capacity(8);
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                pts.push(Point::new3(x, y, z));
            }
        }
    }
    Polytope::hull(&pts, Dim::Three).expect("cube")
}

/// `conv{±e₁, ±e₂, ±e₃}`
pub fn octahedron() -> Polytope {
    let mut pts = Vec::with_capacity(6);
    for i in 0..3 {
        for s in [-1.0, 1.0] {
            let mut c = [0.0; 3];
            c[i] = s;
            pts.push(Point(c));
        }
    }
    Polytope::hull(&pts, Dim::Three).expect("octahedron")
}
