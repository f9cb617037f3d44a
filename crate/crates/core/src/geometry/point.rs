use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Ambient dimension of a body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn n(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_n(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(GeomError::InvalidArgument(format!("unsupported dimension {n}"))),
        }
    }

    /// `n!`
    pub fn factorial(self) -> f64 {
        match self {
            Dim::Two => 2.0,
            Dim::Three => 6.0,
        }
    }

    /// `binom(2n, n)`, the Rogers–Shephard constant.
    pub fn central_binomial(self) -> f64 {
        match self {
            Dim::Two => 6.0,
            Dim::Three => 20.0,
        }
    }

    /// `(n+1)/n!`, the conjectured floor of `|K||(K-K)°|`.
    pub fn simplex_floor(self) -> f64 {
        match self {
            Dim::Two => 1.5,
            Dim::Three => 2.0 / 3.0,
        }
    }
}

/// A point (or vector) of R² or R³.
///
/// Planar points keep a zero third coordinate so that the same arithmetic
/// serves both dimensions; the owning container records which one applies.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Point(pub [f64; 3]);

impl Point {
    pub const ORIGIN: Point = Point([0.0; 3]);

    pub const fn new2(x: f64, y: f64) -> Self {
        Point([x, y, 0.0])
    }

    pub const fn new3(x: f64, y: f64, z: f64) -> Self {
        Point([x, y, z])
    }

    pub fn from_slice(c: &[f64]) -> Result<Self> {
        match *c {
            [x, y] => Ok(Point::new2(x, y)),
            [x, y, z] => Ok(Point::new3(x, y, z)),
            _ => Err(GeomError::DimensionMismatch { expected: 3, got: c.len() }),
        }
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn coords(&self, dim: Dim) -> &[f64] {
        &self.0[..dim.n()]
    }

    pub fn dot(&self, o: &Point) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Point {
        *self / self.norm()
    }

    pub fn cross(&self, o: &Point) -> Point {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Point([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    /// Planar determinant `det(self, o)`.
    pub fn det2(&self, o: &Point) -> f64 {
        self.0[0] * o.0[1] - self.0[1] * o.0[0]
    }

    /// Counterclockwise quarter turn in the plane.
    pub fn perp(&self) -> Point {
        Point::new2(-self.0[1], self.0[0])
    }

    pub fn dist(&self, o: &Point) -> f64 {
        (*self - *o).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Lexicographic comparison on all three coordinates.
    pub fn lex_cmp(&self, o: &Point) -> std::cmp::Ordering {
        for i in 0..3 {
            match self.0[i].total_cmp(&o.0[i]) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

pub fn triple(a: &Point, b: &Point, c: &Point) -> f64 {
    a.dot(&b.cross(c))
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        *self = *self + o;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        p * self
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point([self.0[0] / s, self.0[1] / s, self.0[2] / s])
    }
}

/// Square matrix of size 2 or 3, stored row-major in a 3×3 array.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix {
    dim: Dim,
    m: [[f64; 3]; 3],
}

impl Matrix {
    pub fn identity(dim: Dim) -> Self {
        Self::scalar(dim, 1.0)
    }

    pub fn scalar(dim: Dim, s: f64) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate().take(dim.n()) {
            row[i] = s;
        }
        Matrix { dim, m }
    }

    pub fn from_rows2(r: [[f64; 2]; 2]) -> Self {
        Matrix { dim: Dim::Two, m: [[r[0][0], r[0][1], 0.0], [r[1][0], r[1][1], 0.0], [0.0; 3]] }
    }

    pub fn from_rows3(m: [[f64; 3]; 3]) -> Self {
        Matrix { dim: Dim::Three, m }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: Dim, cols: &[Point]) -> Result<Self> {
        if cols.len() != dim.n() {
            return Err(GeomError::DimensionMismatch { expected: dim.n(), got: cols.len() });
        }
        let mut m = [[0.0; 3]; 3];
        for (j, c) in cols.iter().enumerate() {
            for (i, row) in m.iter_mut().enumerate().take(dim.n()) {
                row[j] = c.0[i];
            }
        }
        Ok(Matrix { dim, m })
    }

    pub fn from_nested(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = Dim::from_n(rows.len())?;
        let mut m = [[0.0; 3]; 3];
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim.n() {
                return Err(GeomError::DimensionMismatch { expected: dim.n(), got: r.len() });
            }
            m[i][..dim.n()].copy_from_slice(r);
        }
        Ok(Matrix { dim, m })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim.n();
        self.m[..n].iter().map(|r| r[..n].to_vec()).collect()
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        match self.dim {
            Dim::Two => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            Dim::Three => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[j][i];
            }
        }
        Matrix { dim: self.dim, m: t }
    }

    /// Inverse via the adjugate; `None` when `|det|` is below `tol`.
    pub fn inverse(&self, tol: f64) -> Option<Matrix> {
        let d = self.det();
        if !(d.abs() > tol) {
            return None;
        }
        let m = &self.m;
        let inv = match self.dim {
            Dim::Two => [[m[1][1] / d, -m[0][1] / d, 0.0], [-m[1][0] / d, m[0][0] / d, 0.0], [0.0; 3]],
            Dim::Three => {
                let mut r = [[0.0; 3]; 3];
                for (i, row) in r.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        // cofactor of (j, i)
                        let (a, b) = ((j + 1) % 3, (j + 2) % 3);
                        let (c, e) = ((i + 1) % 3, (i + 2) % 3);
                        *v = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) / d;
                    }
                }
                r
            }
        };
        Some(Matrix { dim: self.dim, m: inv })
    }

    pub fn apply(&self, p: &Point) -> Point {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.m[i][0] * p.0[0] + self.m[i][1] * p.0[1] + self.m[i][2] * p.0[2];
        }
        Point(out)
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, o: Matrix) -> Matrix {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Matrix { dim: self.dim, m: r }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}
