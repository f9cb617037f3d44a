//! Checkable certificates for the lower bounds `|K||(K−K)°| >= 3/2` in the
//! plane and `>= 2/3` for solids with tetrahedral symmetry.
//!
//! Every inequality of the argument is evaluated on the concrete body and
//! recorded with both sides and its slack, so a certificate can be audited
//! without re-running the geometry.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::body_ops::{central_section, difference_body, polar, project, volume_product, PlaneBasis};
use crate::error::{GeomError, Result};
use crate::geometry::{clip_polygon, intersect_halfspaces_around, shoelace, Dim, Halfspace, Matrix, Point, Polytope};
use crate::symmetry::{classify_low_vertex_symmetric, is_tetrahedrally_symmetric, SymmetryClass};
use crate::tolerance::{DEFAULT_EQ_TOL, DEFAULT_TOL_CERT};

const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertConfig {
    /// Allowed violation of any certified inequality.
    pub tol_cert: f64,
    /// Slack for the equality-case detectors.
    pub eq_tol: f64,
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig { tol_cert: DEFAULT_TOL_CERT, eq_tol: DEFAULT_EQ_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

/// One evaluated inequality. `residual` is the signed slack: non-negative when
/// the relation holds exactly, `-|lhs - rhs|` for equalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

impl InequalityCheck {
    pub fn new(name: &str, relation: Relation, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = match relation {
            Relation::Ge => lhs - rhs,
            Relation::Le => rhs - lhs,
            Relation::Eq => -(lhs - rhs).abs(),
        };
        InequalityCheck { name: name.to_string(), relation, lhs, rhs, residual, pass: residual >= -tol }
    }
}

/// Accumulates checks and remembers the first failure.
struct Ledger {
    tol: f64,
    checks: Vec<InequalityCheck>,
}

impl Ledger {
    fn new(tol: f64) -> Self {
        Ledger { tol, checks: Vec::new() }
    }

    fn ge(&mut self, name: &str, lhs: f64, rhs: f64) {
        self.checks.push(InequalityCheck::new(name, Relation::Ge, lhs, rhs, self.tol));
    }

    fn le(&mut self, name: &str, lhs: f64, rhs: f64) {
        self.checks.push(InequalityCheck::new(name, Relation::Le, lhs, rhs, self.tol));
    }

    fn eq(&mut self, name: &str, lhs: f64, rhs: f64) {
        self.checks.push(InequalityCheck::new(name, Relation::Eq, lhs, rhs, self.tol));
    }

    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn first_failure(checks: &[InequalityCheck]) -> Option<GeomError> {
    checks.iter().find(|c| !c.pass).map(|c| GeomError::CertificateInvalid {
        check: c.name.clone(),
        lhs: c.lhs,
        rhs: c.rhs,
    })
}

fn xy(p: &Point) -> [f64; 2] {
    [p.x(), p.y()]
}

// ---------------------------------------------------------------------------
// Plane

/// An affine regular hexagon `±u, ±v, ±(u+v)` inscribed in a symmetric polygon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexagonFrame {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

impl HexagonFrame {
    pub fn u(&self) -> Point {
        Point::new2(self.u[0], self.u[1])
    }

    pub fn v(&self) -> Point {
        Point::new2(self.v[0], self.v[1])
    }
}

fn is_centrally_symmetric(l: &Polytope, tol: f64) -> bool {
    let thr = tol * (1.0 + l.diameter());
    l.vertices().iter().all(|v| l.vertices().iter().any(|w| (*v + *w).norm() <= thr))
}

/// Parameter range `[lo, hi]` of the line `base + t·dir` inside `l`.
fn chord_range(l: &Polytope, base: &Point, dir: &Point) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for f in l.facets() {
        let rate = f.normal.dot(dir);
        let room = f.offset - f.normal.dot(base);
        if rate > 1e-15 {
            hi = hi.min(room / rate);
        } else if rate < -1e-15 {
            lo = lo.max(room / rate);
        }
    }
    (lo, hi.max(lo))
}

/// Inscribes an affine regular hexagon in a centrally symmetric polygon.
///
/// `u` is the boundary point on the positive first axis. On the side of `u`
/// to its left, chords parallel to `u` shrink monotonically from length
/// `2|u|` through the origin to the supporting edge; the chord of length `|u|`
/// is found by bisection on its offset and gives `v` (its rear end) and
/// `u + v` (its front end). If the supporting edge is itself at least `|u|`
/// long, a centred piece of it is used.
pub fn inscribe_affine_hexagon(l: &Polytope, tol_cert: f64) -> Result<HexagonFrame> {
    if l.dim() != Dim::Two {
        return Err(GeomError::DimensionMismatch { expected: 2, got: l.dim().n() });
    }
    if !is_centrally_symmetric(l, tol_cert) || !l.has_interior_origin() {
        return Err(GeomError::NotCentrallySymmetric);
    }
    let u = Point::new2(1.0, 0.0) / l.gauge(&Point::new2(1.0, 0.0))?;
    let len = u.norm();
    let along = u / len;
    let left = along.perp();
    let top = l.support_value(&left)?;

    let chord_at = |s: f64| {
        let base = left * s;
        let (lo, hi) = chord_range(l, &base, &along);
        (base, lo, hi)
    };

    let (base, lo, hi) = chord_at(top);
    let v = if hi - lo >= len {
        base + along * (0.5 * (lo + hi) - 0.5 * len)
    } else {
        let (mut a, mut b) = (0.0, top);
        let mut converged = false;
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (a + b);
            let (_, lo, hi) = chord_at(mid);
            let g = (hi - lo) - len;
            if g.abs() <= tol_cert * len * 1e-3 || b - a <= f64::EPSILON * top {
                a = mid;
                b = mid;
                converged = true;
                break;
            }
            if g > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        if !converged {
            return Err(GeomError::NoConvergence(MAX_BISECTIONS));
        }
        let (base, lo, _) = chord_at(0.5 * (a + b));
        base + along * lo
    };

    let frame = HexagonFrame { u: xy(&u), v: xy(&v) };
    for p in [u, v, u + v] {
        let g = l.gauge(&p)?;
        if (g - 1.0).abs() > tol_cert {
            return Err(GeomError::NotOnBoundary(g));
        }
    }
    Ok(frame)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate2D {
    pub frame: HexagonFrame,
    /// `|K|`, `(K−K)°` and everything below are in frame coordinates, where
    /// the hexagon is `±(1,0), ±(0,1), ±(1,1)`.
    pub area: f64,
    pub polar_area: f64,
    #[serde(rename = "S1")]
    pub s1: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
    #[serde(rename = "S3")]
    pub s3: f64,
    /// Boundary points `(a,1)`, `(1,b)`, `(c,1−c)` of `K−K`.
    pub chords: [[f64; 2]; 3],
    /// Gauge in `K−K` of `(1/2Sᵢ)dᵢ`; at most one.
    pub containment_residuals: [f64; 3],
    /// `1/(4Sᵢ)`, lower bounds for `|K|`.
    pub zang_bounds: [f64; 3],
    pub certified_bound: f64,
    pub product: f64,
    pub valid: bool,
    pub inequalities: Vec<InequalityCheck>,
}

impl Certificate2D {
    pub fn first_failure(&self) -> Option<GeomError> {
        first_failure(&self.inequalities)
    }
}

/// Area of the part of `l` inside the cone spanned by `from` and `to`
/// (counterclockwise, less than a half-turn apart).
fn sector_area(l: &Polytope, from: &Point, to: &Point) -> f64 {
    let ring: Vec<Point> = l.vertices().to_vec();
    // Keep det(from, x) >= 0 and det(x, to) >= 0.
    let a = clip_polygon(&ring, &Point::new2(from.y(), -from.x()), 0.0);
    let b = clip_polygon(&a, &Point::new2(-to.y(), to.x()), 0.0);
    shoelace(&b).abs()
}

/// Evaluates every step of the planar argument on `k` and records the
/// result; never fails on a violated inequality (see [`certify_plane`]).
pub fn plane_certificate(k: &Polytope, cfg: &CertConfig) -> Result<Certificate2D> {
    if k.dim() != Dim::Two {
        return Err(GeomError::DimensionMismatch { expected: 2, got: k.dim().n() });
    }
    let l = polar(&difference_body(k))?;
    let frame = inscribe_affine_hexagon(&l, cfg.tol_cert)?;
    let (u, v) = (frame.u(), frame.v());

    // A sends u, v to the unit vectors; K moves by A^{-T} so that the polar
    // of the new difference body is A·L.
    let basis = Matrix::from_columns(Dim::Two, &[u, v])?;
    let inv = basis.inverse(1e-300).ok_or(GeomError::SingularMatrix(basis.det()))?;
    let kt = k.apply_linear(&basis.transpose())?;
    let dt = difference_body(&kt);
    let lt = polar(&dt)?;

    let mut led = Ledger::new(cfg.tol_cert);
    let e1 = Point::new2(1.0, 0.0);
    let e2 = Point::new2(0.0, 1.0);
    let diag = Point::new2(1.0, 1.0);
    for (name, p) in [("frame: |(1,0)|_L = 1", e1), ("frame: |(0,1)|_L = 1", e2), ("frame: |(1,1)|_L = 1", diag)] {
        led.eq(name, lt.gauge(&p)?, 1.0);
    }
    // Consistency of the two routes to A·L.
    let mapped = l.apply_linear(&inv)?;
    led.eq("transform: |A·L| = |(A^-T K − A^-T K)°|", mapped.volume(), lt.volume());

    let s =
        [sector_area(&lt, &e1, &diag), sector_area(&lt, &diag, &e2), sector_area(&lt, &e2, &Point::new2(-1.0, 0.0))];
    led.eq("sectors: 2(S1+S2+S3) = |L|", 2.0 * (s[0] + s[1] + s[2]), lt.volume());

    let dirs = [e1, e2, Point::new2(-1.0, 1.0)];
    let mut containment = [0.0; 3];
    for i in 0..3 {
        containment[i] = dt.gauge(&(dirs[i] / (2.0 * s[i])))?;
        led.le(&format!("containment: |d{}/(2S{})|_(K-K) <= 1", i + 1, i + 1), containment[i], 1.0);
    }

    let chord_dirs = [e2, e1, diag];
    let mut chords = [Point::ORIGIN; 3];
    for i in 0..3 {
        chords[i] = dt.support_point(&chord_dirs[i])?;
    }
    led.eq("chord: (a,1) on boundary", chords[0].y(), 1.0);
    led.eq("chord: (1,b) on boundary", chords[1].x(), 1.0);
    led.eq("chord: (c,1-c) on boundary", chords[2].x() + chords[2].y(), 1.0);

    let area = kt.volume();
    let mut zang = [0.0; 3];
    for i in 0..3 {
        zang[i] = 0.5 * chords[i].det2(&(dirs[i] / (2.0 * s[i]))).abs();
        led.eq(&format!("zang: det bound = 1/(4S{})", i + 1), zang[i], 1.0 / (4.0 * s[i]));
        led.ge(&format!("zang: |K| >= 1/(4S{})", i + 1), area, zang[i]);
    }

    let product = area * lt.volume();
    let certified = 6.0 * area * s[0].min(s[1]).min(s[2]);
    led.eq("product = 2|K|(S1+S2+S3)", product, 2.0 * area * (s[0] + s[1] + s[2]));
    led.eq("product invariant under the frame map", product, volume_product(k));
    led.ge("product >= 6|K|min(S)", product, certified);
    led.ge("6|K|min(S) >= 3/2", certified, 1.5);

    Ok(Certificate2D {
        frame,
        area,
        polar_area: lt.volume(),
        s1: s[0],
        s2: s[1],
        s3: s[2],
        chords: chords.map(|c| xy(&c)),
        containment_residuals: containment,
        zang_bounds: zang,
        certified_bound: certified,
        product,
        valid: led.all_pass(),
        inequalities: led.checks,
    })
}

/// [`plane_certificate`], failing with the first violated inequality.
pub fn certify_plane(k: &Polytope, cfg: &CertConfig) -> Result<Certificate2D> {
    let cert = plane_certificate(k, cfg)?;
    match cert.first_failure() {
        Some(e) => Err(e),
        None => Ok(cert),
    }
}

// ---------------------------------------------------------------------------
// Space

/// Normals of the four planes cutting space into 14 cones.
const CUT_NORMALS: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [-1.0, -1.0, 1.0]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieceColor {
    Blue,
    Red,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub color: PieceColor,
    /// Signs of the four cut normals on the open cone.
    pub signs: [i8; 4],
    /// The diagonal or axis direction inside the cone.
    pub direction: [f64; 3],
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    #[serde(rename = "V1")]
    pub v1: f64,
    #[serde(rename = "V2")]
    pub v2: f64,
    pub pieces: Vec<Piece>,
}

/// The 14 cones cut out by the planes `(±1,±1,1)⊥`.
///
/// Of the 16 sign patterns, the two with `s₁ = s₄ = −s₂ = −s₃` are empty
/// because `n₁ + n₄ = n₂ + n₃`. Each remaining cone contains exactly one of
/// the directions `±(1,±1,±1)` (blue) or `±eᵢ` (red).
pub fn partition_cones() -> Vec<(PieceColor, [i8; 4], Point)> {
    let mut candidates = Vec::with_capacity(14);
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                candidates.push((PieceColor::Blue, Point::new3(sx, sy, sz)));
            }
        }
    }
    for i in 0..3 {
        for s in [1.0, -1.0] {
            let mut c = [0.0; 3];
            c[i] = s;
            candidates.push((PieceColor::Red, Point(c)));
        }
    }
    let mut out = Vec::with_capacity(14);
    for mask in 0u8..16 {
        let signs: [i8; 4] = std::array::from_fn(|i| if mask >> i & 1 == 0 { 1 } else { -1 });
        if signs[0] == signs[3] && signs[1] == signs[2] && signs[0] != signs[1] {
            continue;
        }
        let inside =
            candidates.iter().find(|(_, d)| (0..4).all(|i| f64::from(signs[i]) * Point(CUT_NORMALS[i]).dot(d) > 0.0));
        let (color, d) = inside.expect("every non-empty sign pattern holds a diagonal or an axis");
        out.push((*color, signs, *d));
    }
    out
}

fn cone_piece(lp: &Polytope, signs: &[i8; 4], d: &Point) -> Result<Polytope> {
    let mut h: Vec<Halfspace> = lp.facets().to_vec();
    for i in 0..4 {
        h.push(Halfspace::new(Point(CUT_NORMALS[i]) * -f64::from(signs[i]), 0.0));
    }
    let interior = *d * (0.5 / lp.gauge(d)?);
    intersect_halfspaces_around(&h, Dim::Three, &interior)
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Volumes of the 14 pieces of `lp`, with `V₁ = 8·|blue piece at (1,1,1)|`
/// and `V₂ = 6·|red piece at e₃|`.
pub fn partition_3d(lp: &Polytope, tol_cert: f64) -> Result<Partition> {
    if lp.dim() != Dim::Three {
        return Err(GeomError::DimensionMismatch { expected: 3, got: lp.dim().n() });
    }
    let mut pieces = Vec::with_capacity(14);
    for (color, signs, d) in partition_cones() {
        let volume = cone_piece(lp, &signs, &d)?.volume();
        pieces.push(Piece { color, signs, direction: d.0, volume });
    }
    let pick = |d: [f64; 3]| pieces.iter().find(|p| p.direction == d).map(|p| p.volume).expect("cone present");
    let blue = pick([1.0, 1.0, 1.0]);
    let red = pick([0.0, 0.0, 1.0]);
    for p in &pieces {
        let reference = if p.color == PieceColor::Blue { blue } else { red };
        if rel_gap(p.volume, reference) > tol_cert {
            return Err(GeomError::SymmetryViolation(format!(
                "{:?} piece at {:?} has volume {} against {}",
                p.color, p.direction, p.volume, reference
            )));
        }
    }
    Ok(Partition { v1: 8.0 * blue, v2: 6.0 * red, pieces })
}

/// `S_hex = |lp ∩ (1,1,1)⊥|/6` and `S_square = |lp ∩ (0,0,1)⊥|/4`.
pub fn section_areas(lp: &Polytope) -> Result<(f64, f64)> {
    let hex = central_section(lp, &PlaneBasis::new(Point::new3(1.0, 1.0, 1.0))?)?.volume() / 6.0;
    let sq = central_section(lp, &PlaneBasis::new(Point::new3(0.0, 0.0, 1.0))?)?.volume() / 4.0;
    Ok((hex, sq))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    Case1,
    Case2,
    Case3,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub bound: f64,
}

/// The case analysis for solids, evaluated on `K` rescaled to unit volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate3D {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "V1")]
    pub v1: f64,
    #[serde(rename = "V2")]
    pub v2: f64,
    pub s_hex: f64,
    pub s_square: f64,
    pub volume: f64,
    pub polar_volume: f64,
    pub case_tag: CaseTag,
    pub estimates: Vec<Estimate>,
    pub certified_bound: f64,
    pub product: f64,
    pub valid: bool,
    pub inequalities: Vec<InequalityCheck>,
}

impl Certificate3D {
    pub fn first_failure(&self) -> Option<GeomError> {
        first_failure(&self.inequalities)
    }
}

/// Lower bound `(2/9 + (4/(3√3))/t + (2/(3√3))t)/2` of the third case, in
/// terms of `t = S_square/S_hex`.
pub fn case3_floor(t: f64) -> f64 {
    let c = 3.0 * 3f64.sqrt();
    0.5 * (2.0 / 9.0 + 4.0 / c / t + 2.0 / c * t)
}

pub fn space_certificate(k: &Polytope, cfg: &CertConfig) -> Result<Certificate3D> {
    if k.dim() != Dim::Three {
        return Err(GeomError::DimensionMismatch { expected: 3, got: k.dim().n() });
    }
    if !is_tetrahedrally_symmetric(k, cfg.tol_cert) {
        return Err(GeomError::NotSymmetric);
    }
    let k = k.scale(k.volume().cbrt().recip())?;
    let d = difference_body(&k);
    let lp = polar(&d)?;
    let vol = k.volume();
    let lp_vol = lp.volume();
    let sqrt3 = 3f64.sqrt();
    let mut led = Ledger::new(cfg.tol_cert);

    let diag = Point::new3(1.0, 1.0, 1.0);
    let ez = Point::new3(0.0, 0.0, 1.0);
    let a = 1.0 / lp.gauge(&diag)?;
    let b = 1.0 / lp.gauge(&ez)?;
    led.eq("boundary: (1/3a)(1,1,1) in d(K-K)", d.gauge(&(diag / (3.0 * a)))?, 1.0);
    led.eq("boundary: (1/b)(0,0,1) in d(K-K)", d.gauge(&(ez / b))?, 1.0);

    let part = partition_3d(&lp, cfg.tol_cert)?;
    let (v1, v2) = (part.v1, part.v2);
    led.eq("tiling: V1 + V2 = |(K-K)°|", v1 + v2, lp_vol);
    let (s_hex, s_sq) = section_areas(&lp)?;

    let pr_sq = project(&k, &PlaneBasis::new(ez)?)?.volume();
    let pr_hex = project(&k, &PlaneBasis::new(diag)?)?.volume();
    led.ge("projection: |Pr_z K| >= 1/(2 S_square)", pr_sq, 1.0 / (2.0 * s_sq));
    led.ge("projection: |Pr_diag K| >= 1/(4 S_hex)", pr_hex, 1.0 / (4.0 * s_hex));

    led.ge("inclusion: V1/8 >= a S_hex/sqrt3", v1 / 8.0, a * s_hex / sqrt3);
    led.ge("inclusion: V2/6 >= 4 S_hex b/(3 sqrt3)", v2 / 6.0, 4.0 * s_hex * b / (3.0 * sqrt3));
    led.ge("inclusion: |(K-K)°|/8 >= a S_square", lp_vol / 8.0, a * s_sq);

    let est = [
        Estimate { name: "|K| V1".into(), value: vol * v1, bound: 2.0 / 9.0 },
        Estimate { name: "|K| V2".into(), value: vol * v2, bound: 4.0 / (3.0 * sqrt3) * s_hex / s_sq },
        Estimate { name: "|K| |(K-K)°|".into(), value: vol * lp_vol, bound: 2.0 / (3.0 * sqrt3) * s_sq / s_hex },
    ];
    for (i, e) in est.iter().enumerate() {
        led.ge(&format!("estimate {}: {} >= bound", i + 1, e.name), e.value, e.bound);
    }

    let product = vol * lp_vol;
    let (case_tag, certified) = if v2 >= 2.0 * v1 {
        (CaseTag::Case1, 3.0 * vol * v1)
    } else if s_hex / s_sq >= 1.0 / sqrt3 {
        (CaseTag::Case2, 1.5 * vol * v2)
    } else {
        (CaseTag::Case3, 0.5 * (vol * v1 + vol * v2 + vol * lp_vol))
    };
    match case_tag {
        CaseTag::Case1 => led.ge("case 1: 3 |K| V1 >= 3 (2/9)", certified, 2.0 / 3.0),
        CaseTag::Case2 => led.ge("case 2: (3/2) (4/(3 sqrt3)) S_hex/S_square >= 2/3", 1.5 * est[1].bound, 2.0 / 3.0),
        CaseTag::Case3 => led.ge("case 3: closed-form floor >= 2/3", case3_floor(s_sq / s_hex), 2.0 / 3.0),
    }
    led.ge("product >= certified bound", product, certified);
    led.ge("certified bound >= 2/3", certified, 2.0 / 3.0);

    Ok(Certificate3D {
        a,
        b,
        v1,
        v2,
        s_hex,
        s_square: s_sq,
        volume: vol,
        polar_volume: lp_vol,
        case_tag,
        estimates: est.to_vec(),
        certified_bound: certified,
        product,
        valid: led.all_pass(),
        inequalities: led.checks,
    })
}

/// [`space_certificate`], failing with the first violated inequality.
pub fn certify_space(k: &Polytope, cfg: &CertConfig) -> Result<Certificate3D> {
    let cert = space_certificate(k, cfg)?;
    match cert.first_failure() {
        Some(e) => Err(e),
        None => Ok(cert),
    }
}

// ---------------------------------------------------------------------------
// Standalone checks

/// Volume of the projection of `k` along `u`: a length in the plane, an area
/// in space.
pub fn projection_measure(k: &Polytope, u: &Point) -> Result<f64> {
    match k.dim() {
        Dim::Two => {
            let p = Point::new2(-u.y(), u.x());
            let len = p.norm();
            if !(len > 0.0) {
                return Err(GeomError::ZeroDirection);
            }
            let p = p / len;
            Ok(k.support_value(&p)? + k.support_value(&-p)?)
        }
        Dim::Three => Ok(project(k, &PlaneBasis::new(*u)?)?.volume()),
    }
}

/// `|K| >= (1/n)|u||Pr_{u⊥}K|` for `u` on the boundary of `K−K`; returns
/// whether it holds within `tol_cert` and the slack.
pub fn check_zang(k: &Polytope, u: &Point, tol_cert: f64) -> Result<(bool, f64)> {
    let g = difference_body(k).gauge(u)?;
    if (g - 1.0).abs() > tol_cert {
        return Err(GeomError::NotOnBoundary(g));
    }
    zang_margin(k, u, tol_cert)
}

fn zang_margin(k: &Polytope, u: &Point, tol_cert: f64) -> Result<(bool, f64)> {
    let n = k.dim().n() as f64;
    let margin = k.volume() - u.norm() * projection_measure(k, u)? / n;
    Ok((margin >= -tol_cert * k.volume().max(1.0), margin))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZangSample {
    pub directions: usize,
    pub violations: usize,
    pub min_margin: f64,
}

/// Runs [`check_zang`] at `n` boundary points of `K−K`: directions uniform on
/// the circle or sphere (Gaussian coordinates from ChaCha8 seeded with
/// `seed`), scaled onto the boundary by the gauge.
pub fn sample_zang(k: &Polytope, n: usize, seed: u64, tol_cert: f64) -> Result<ZangSample> {
    let d = difference_body(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = k.dim().n();
    let mut out = ZangSample { directions: 0, violations: 0, min_margin: f64::INFINITY };
    while out.directions < n {
        let mut dir = Point::ORIGIN;
        for i in 0..dims {
            dir.0[i] = rng.sample(StandardNormal);
        }
        if dir.norm() < 1e-6 {
            continue;
        }
        // On the boundary by construction, up to rounding.
        let u = dir / d.gauge(&dir)?;
        let (holds, margin) = zang_margin(k, &u, tol_cert)?;
        out.directions += 1;
        out.violations += usize::from(!holds);
        out.min_margin = out.min_margin.min(margin);
    }
    Ok(out)
}

/// Symmetric-difference area of `(K−K)° ∩ u⊥` and `(Pr_{u⊥}(K−K))°`.
pub fn check_section_projection_duality(k: &Polytope, u: &Point) -> Result<f64> {
    let d = difference_body(k);
    let basis = PlaneBasis::new(*u)?;
    let section = central_section(&polar(&d)?, &basis)?;
    let dual = polar(&project(&d, &basis)?)?;
    let mut common = section.vertices().to_vec();
    for f in dual.facets() {
        common = clip_polygon(&common, &f.normal, f.offset);
    }
    let overlap = shoelace(&common).abs();
    Ok((section.volume() - overlap).max(0.0) + (dual.volume() - overlap).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainBound {
    pub value: f64,
    pub rs_ratio: f64,
}

/// Lower bound for the product through the symmetric body `K−K`:
/// `|K−K||(K−K)°| / binom(2n, n)`, with the ratio `|K−K|/|K|`.
pub fn chain_lower_bound(k: &Polytope) -> ChainBound {
    let d = difference_body(k);
    let lp = polar(&d).expect("a difference body contains the origin in its interior");
    ChainBound { value: d.volume() * lp.volume() / k.dim().central_binomial(), rs_ratio: d.volume() / k.volume() }
}

/// Floor of the chain from the symmetric Mahler bound `4ⁿ/n!` (known in
/// dimensions two and three): `4/3` in the plane, `8/15` in space.
pub fn chain_mahler_floor(dim: Dim) -> f64 {
    4f64.powi(dim.n() as i32) / dim.factorial() / dim.central_binomial()
}

/// Floor of the chain from the general bound `πⁿ/n!` for symmetric bodies.
pub fn chain_kuperberg_floor(dim: Dim) -> f64 {
    PI.powi(dim.n() as i32) / dim.factorial() / dim.central_binomial()
}

/// Equality in the planar bound: product `3/2` on a triangle.
pub fn detect_equality_2d(k: &Polytope, eq_tol: f64) -> bool {
    k.dim() == Dim::Two && k.vertices().len() == 3 && volume_product(k) <= 1.5 + eq_tol
}

/// Equality in the symmetric bound in space: product `2/3` on a tetrahedron.
pub fn detect_equality_3d(k: &Polytope, eq_tol: f64) -> Result<bool> {
    if k.dim() != Dim::Three {
        return Err(GeomError::DimensionMismatch { expected: 3, got: k.dim().n() });
    }
    let class = classify_low_vertex_symmetric(k)?;
    Ok(class == SymmetryClass::Tetrahedron && volume_product(k) <= 2.0 / 3.0 + eq_tol)
}
