//! Simulated annealing over polygons and tetrahedrally symmetric solids, and
//! the Santaló point of a body.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::body_ops::volume_product;
use crate::error::{GeomError, Result};
use crate::geometry::{BodyFile, Dim, Point, Polytope};
use crate::symmetry::symmetrize_orbit;

/// Consecutive Metropolis rejections after which the step shrinks.
const REJECTION_STREAK: usize = 20;
/// The temperature is multiplied by `cooling` once per this many iterations.
const COOLING_PERIOD: usize = 50;
const MAX_TRAJECTORY: usize = 1000;
const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyClass {
    /// Hulls of this many points in the plane.
    Polygon2D(usize),
    /// Hulls of the orbits of this many generators.
    TetraSymmetric3D(usize),
}

impl BodyClass {
    pub fn dim(&self) -> Dim {
        match self {
            BodyClass::Polygon2D(_) => Dim::Two,
            BodyClass::TetraSymmetric3D(_) => Dim::Three,
        }
    }

    /// Lower bound for the product on this class.
    pub fn floor(&self) -> f64 {
        self.dim().simplex_floor()
    }

    fn n_points(&self) -> usize {
        match *self {
            BodyClass::Polygon2D(n) | BodyClass::TetraSymmetric3D(n) => n,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            BodyClass::Polygon2D(n) if n < 3 => {
                Err(GeomError::InvalidArgument(format!("a polygon needs at least 3 points, got {n}")))
            }
            BodyClass::TetraSymmetric3D(0) => Err(GeomError::InvalidArgument("need at least one generator".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BodyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyClass::Polygon2D(n) => write!(f, "polygon:{n}"),
            BodyClass::TetraSymmetric3D(k) => write!(f, "tetra:{k}"),
        }
    }
}

impl FromStr for BodyClass {
    type Err = GeomError;

    /// `polygon:N` or `tetra[:K]` (one generator by default).
    fn from_str(s: &str) -> Result<Self> {
        let (kind, count) = match s.split_once(':') {
            Some((k, c)) => (k, Some(c)),
            None => (s, None),
        };
        let parse =
            |c: &str| c.parse::<usize>().map_err(|_| GeomError::InvalidArgument(format!("bad count in class {s:?}")));
        let class = match (kind, count) {
            ("polygon", Some(c)) => BodyClass::Polygon2D(parse(c)?),
            ("tetra", Some(c)) => BodyClass::TetraSymmetric3D(parse(c)?),
            ("tetra", None) => BodyClass::TetraSymmetric3D(1),
            _ => return Err(GeomError::InvalidArgument(format!("unknown class {s:?}"))),
        };
        class.validate()?;
        Ok(class)
    }
}

impl Serialize for BodyClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BodyClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub class: BodyClass,
    pub restarts: usize,
    pub max_iters: usize,
    pub initial_step: f64,
    pub cooling: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(class: BodyClass, restarts: usize, max_iters: usize, seed: u64) -> Self {
        SearchConfig { class, restarts, max_iters, initial_step: 0.1, cooling: 0.95, seed }
    }

    pub fn validate(&self) -> Result<()> {
        self.class.validate()?;
        if self.restarts < 1 {
            return Err(GeomError::InvalidArgument("restarts must be at least 1".into()));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(GeomError::InvalidArgument(format!("cooling must lie in (0, 1), got {}", self.cooling)));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(GeomError::InvalidArgument("initial step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub initial_product: f64,
    pub best_product: f64,
    /// Smallest product of any body evaluated in this restart.
    pub min_evaluated: f64,
    pub accepted: usize,
    pub rejected: usize,
    pub degenerate: usize,
    pub final_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub best_product: f64,
    pub best_body: BodyFile,
    /// Best-so-far product of the winning restart, `(iteration, product)`.
    pub trajectory: Vec<(usize, f64)>,
    pub restarts: Vec<RestartSummary>,
}

impl SearchReport {
    pub fn min_evaluated(&self) -> f64 {
        self.restarts.iter().map(|r| r.min_evaluated).fold(f64::INFINITY, f64::min)
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Body spanned by the free points of a class, if full-dimensional.
pub fn build_body(class: &BodyClass, points: &[Point]) -> Result<Polytope> {
    match class {
        BodyClass::Polygon2D(_) => Polytope::hull(points, Dim::Two),
        BodyClass::TetraSymmetric3D(_) => symmetrize_orbit(points),
    }
}

fn sample_points(class: &BodyClass, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..class.n_points())
        .map(|_| match class {
            BodyClass::Polygon2D(_) => loop {
                let p = Point::new2(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                if p.norm() <= 1.0 {
                    break p;
                }
            },
            BodyClass::TetraSymmetric3D(_) => {
                Point::new3(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }
        })
        .collect()
}

fn random_points(class: &BodyClass, rng: &mut ChaCha8Rng) -> (Vec<Point>, Polytope) {
    for _ in 0..MAX_REDRAWS {
        let pts = sample_points(class, rng);
        if let Ok(body) = build_body(class, &pts) {
            return (pts, body);
        }
    }
    panic!("no full-dimensional body in {MAX_REDRAWS} draws");
}

/// Polygon: hull of points uniform in the unit disk. Symmetric solid: orbit
/// hull of generators uniform in `[-1,1]³`. Redrawn until full-dimensional.
pub fn random_body(class: &BodyClass, seed: u64) -> Result<Polytope> {
    class.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_points(class, &mut rng).1)
}

fn downsample(points: &[(usize, f64)]) -> Vec<(usize, f64)> {
    if points.len() <= MAX_TRAJECTORY {
        return points.to_vec();
    }
    let last = points.len() - 1;
    (0..MAX_TRAJECTORY).map(|i| points[i * last / (MAX_TRAJECTORY - 1)]).collect()
}

struct RestartResult {
    summary: RestartSummary,
    best_points: Vec<Point>,
    trajectory: Vec<(usize, f64)>,
}

fn normalize(points: &mut [Point], body: &Polytope) {
    let s = body.volume().powf(-1.0 / body.dim().n() as f64);
    for p in points.iter_mut() {
        *p = *p * s;
    }
}

fn run_restart(config: &SearchConfig, restart: usize) -> RestartResult {
    let class = &config.class;
    let dim = class.dim().n();
    let mut rng = restart_rng(config.seed, restart);
    let (mut current, body) = random_points(class, &mut rng);
    normalize(&mut current, &body);
    let mut value = volume_product(&body);
    let initial = value;
    let mut best = (value, current.clone());
    let mut min_evaluated = value;
    let mut trajectory = vec![(0, value)];

    let t0 = 0.1 * initial;
    let mut step = config.initial_step;
    let (mut accepted, mut rejected, mut degenerate, mut streak) = (0, 0, 0, 0);

    for iter in 1..=config.max_iters {
        let temperature = t0 * config.cooling.powi((iter / COOLING_PERIOD) as i32);
        let idx = rng.random_range(0..current.len());
        let mut proposal = current.clone();
        for c in 0..dim {
            let g: f64 = rng.sample(StandardNormal);
            proposal[idx].0[c] += step * g;
        }
        let u: f64 = rng.random();
        let body = match build_body(class, &proposal) {
            Ok(b) if b.volume() > 1e-9 => b,
            _ => {
                degenerate += 1;
                continue;
            }
        };
        let candidate = volume_product(&body);
        if !candidate.is_finite() {
            degenerate += 1;
            continue;
        }
        min_evaluated = min_evaluated.min(candidate);
        let delta = candidate - value;
        if delta <= 0.0 || u < (-delta / temperature).exp() {
            accepted += 1;
            streak = 0;
            normalize(&mut proposal, &body);
            current = proposal;
            value = candidate;
            if value < best.0 {
                best = (value, current.clone());
                trajectory.push((iter, value));
            }
        } else {
            rejected += 1;
            streak += 1;
            if streak >= REJECTION_STREAK {
                step *= config.cooling;
                streak = 0;
            }
        }
    }
    if trajectory.last().map(|t| t.0) != Some(config.max_iters) {
        trajectory.push((config.max_iters, best.0));
    }
    RestartResult {
        summary: RestartSummary {
            restart,
            initial_product: initial,
            best_product: best.0,
            min_evaluated,
            accepted,
            rejected,
            degenerate,
            final_step: step,
        },
        best_points: best.1,
        trajectory: downsample(&trajectory),
    }
}

/// Best product over independent annealing restarts; restarts run on the
/// current rayon pool and are merged in index order.
pub fn minimize_volume_product(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let results: Vec<RestartResult> = (0..config.restarts).into_par_iter().map(|r| run_restart(config, r)).collect();
    let winner = results
        .iter()
        .min_by(|a, b| a.summary.best_product.total_cmp(&b.summary.best_product))
        .expect("at least one restart");
    let body = build_body(&config.class, &winner.best_points)?;
    Ok(SearchReport {
        config: *config,
        best_product: volume_product(&body),
        best_body: BodyFile::from_polytope(&body),
        trajectory: winner.trajectory.clone(),
        restarts: results.into_iter().map(|r| r.summary).collect(),
    })
}

// ---------------------------------------------------------------------------
// Santaló point

const MAX_EVALUATIONS: usize = 10_000;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Area or volume of `(K − z)°`, from the facets of `K`; infinite unless `z`
/// is interior.
fn polar_measure(k: &Polytope, z: &Point) -> f64 {
    let mut pts = Vec::with_capacity(k.facets().len());
    for f in k.facets() {
        let room = f.offset - f.normal.dot(z);
        if !(room > 0.0) {
            return f64::INFINITY;
        }
        pts.push(f.normal / room);
    }
    Polytope::hull(&pts, k.dim()).map(|p| p.volume()).unwrap_or(f64::INFINITY)
}

struct Counter<'a> {
    k: &'a Polytope,
    evals: usize,
}

impl Counter<'_> {
    fn f(&mut self, z: &Point) -> Result<f64> {
        self.evals += 1;
        if self.evals > MAX_EVALUATIONS {
            return Err(GeomError::NoConvergence(MAX_EVALUATIONS));
        }
        Ok(polar_measure(self.k, z))
    }
}

/// Interval of `t` with `z + t·d` inside `k`.
fn line_range(k: &Polytope, z: &Point, d: &Point) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for f in k.facets() {
        let rate = f.normal.dot(d);
        let room = f.offset - f.normal.dot(z);
        if rate > 1e-15 {
            hi = hi.min(room / rate);
        } else if rate < -1e-15 {
            lo = lo.max(room / rate);
        }
    }
    (lo, hi)
}

/// Golden-section minimum of `t ↦ f(z + t·d)` over the chord through `z`.
fn line_search(c: &mut Counter, z: &Point, d: &Point, tol: f64) -> Result<(Point, f64)> {
    let (lo, hi) = line_range(c.k, z, d);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = c.f(&(*z + *d * x1))?;
    let mut f2 = c.f(&(*z + *d * x2))?;
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = c.f(&(*z + *d * x1))?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = c.f(&(*z + *d * x2))?;
        }
    }
    let (t, ft) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let f0 = c.f(z)?;
    Ok(if ft < f0 { (*z + *d * t, ft) } else { (*z, f0) })
}

/// Minimizer `z` of `|(K − z)°|` over the interior, by cyclic coordinate
/// descent with golden-section line searches; returns `z` and
/// `|K||(K − z)°|`.
pub fn santalo_point(k: &Polytope) -> Result<(Point, f64)> {
    let n = k.dim().n();
    let mut c = Counter { k, evals: 0 };
    let mut z = k.centroid_of_vertices();
    let mut fz = c.f(&z)?;
    let tol = 1e-10 * (1.0 + k.diameter());
    loop {
        let start = z;
        let before = fz;
        for i in 0..n {
            let mut d = Point::ORIGIN;
            d.0[i] = 1.0;
            (z, fz) = line_search(&mut c, &z, &d, tol)?;
        }
        // Pattern move along the sweep's net displacement.
        let moved = z - start;
        if moved.norm() > tol {
            (z, fz) = line_search(&mut c, &z, &moved.normalized(), tol)?;
        }
        if (before - fz) <= 1e-14 * before && (z - start).norm() <= 10.0 * tol {
            break;
        }
    }
    Ok((z, k.volume() * fz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::*;

    #[test]
    fn class_strings_round_trip() {
        for s in ["polygon:8", "tetra:2"] {
            assert_eq!(s.parse::<BodyClass>().unwrap().to_string(), s);
        }
        assert_eq!("tetra".parse::<BodyClass>().unwrap(), BodyClass::TetraSymmetric3D(1));
        assert!("polygon:2".parse::<BodyClass>().is_err());
        assert!("sphere:3".parse::<BodyClass>().is_err());
    }

    #[test]
    fn random_bodies() {
        for seed in 0..20 {
            let t = random_body(&BodyClass::Polygon2D(3), seed).unwrap();
            assert_eq!(t.vertices().len(), 3);
            assert!(volume_product(&t) >= 1.5 - 1e-9);
        }
        let tet = build_body(&BodyClass::TetraSymmetric3D(1), &[Point::new3(1.0, 1.0, -1.0)]).unwrap();
        assert!(tet.same_vertex_set(&tetrahedron(), 1e-12));
        let b = random_body(&BodyClass::TetraSymmetric3D(2), 42).unwrap();
        assert!(volume_product(&b) >= 2.0 / 3.0 - 1e-9);
    }

    #[test]
    fn triangles_are_optimal_immediately() {
        let cfg = SearchConfig::new(BodyClass::Polygon2D(3), 10, 200, 1);
        let r = minimize_volume_product(&cfg).unwrap();
        assert!((r.best_product - 1.5).abs() < 1e-6);
        assert!(r.trajectory.windows(2).all(|w| w[1].1 <= w[0].1));
    }

    #[test]
    fn search_is_deterministic() {
        let cfg = SearchConfig::new(BodyClass::Polygon2D(6), 3, 300, 9);
        let a = serde_json::to_string(&minimize_volume_product(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&minimize_volume_product(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_configs() {
        let mut cfg = SearchConfig::new(BodyClass::Polygon2D(4), 0, 10, 1);
        assert!(minimize_volume_product(&cfg).is_err());
        cfg.restarts = 1;
        cfg.cooling = 1.0;
        assert!(minimize_volume_product(&cfg).is_err());
    }

    #[test]
    fn santalo_examples() {
        let (z, p) = santalo_point(&square()).unwrap();
        assert!(z.norm() < 1e-8);
        assert!((p - 8.0).abs() < 1e-9);
        let (z, p) = santalo_point(&unit_triangle()).unwrap();
        assert!((p - 6.75).abs() < 1e-6, "{p}");
        assert!((z - Point::new2(1.0 / 3.0, 1.0 / 3.0)).norm() < 1e-4);
        let (_, p) = santalo_point(&tetrahedron()).unwrap();
        assert!((p - 64.0 / 9.0).abs() < 1e-5, "{p}");
    }
}
