//! Monte-Carlo volume estimates from membership tests alone.
//!
//! Samples come from ChaCha8 (`rand_chacha`), seeded with `seed_from_u64(seed)`.
//! Sample `i` belongs to chunk `i / CHUNK`, and chunk `c` draws from stream
//! `c` of that seed, so the estimate does not depend on how chunks are
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::geometry::{Dim, Point, Polytope};

/// Samples per independent substream.
pub const CHUNK: u64 = 1 << 16;
pub const MIN_SAMPLES: u64 = 10_000;
/// Relative inflation of vertex bounding boxes.
pub const BOX_INFLATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl OracleEstimate {
    /// Whether `exact` is within `k` standard errors of the estimate.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.stderr
    }
}

/// Axis-aligned box `[lo, hi]`; in the plane the third coordinates are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub lo: Point,
    pub hi: Point,
}

impl BoundingBox {
    pub fn new(lo: Point, hi: Point) -> Self {
        BoundingBox { lo, hi }
    }

    /// Vertex bounding box of `p`, each side widened by `BOX_INFLATION` of the
    /// diameter.
    pub fn around(p: &Polytope) -> Self {
        let (lo, hi) = p.bounding_box();
        let pad = BOX_INFLATION * p.diameter();
        let mut out = BoundingBox { lo, hi };
        for i in 0..p.dim().n() {
            out.lo.0[i] -= pad;
            out.hi.0[i] += pad;
        }
        out
    }

    fn measure(&self, dim: Dim) -> f64 {
        (0..dim.n()).map(|i| self.hi[i] - self.lo[i]).product()
    }
}

fn count_chunk<F>(member: &F, bbox: &BoundingBox, dim: Dim, seed: u64, chunk: u64, len: u64) -> u64
where
    F: Fn(&Point) -> bool,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let n = dim.n();
    let mut hits = 0;
    for _ in 0..len {
        let mut p = Point::ORIGIN;
        for i in 0..n {
            let t: f64 = rng.random();
            p.0[i] = bbox.lo[i] + t * (bbox.hi[i] - bbox.lo[i]);
        }
        if member(&p) {
            hits += 1;
        }
    }
    hits
}

fn estimate<F>(member: &F, bbox: &BoundingBox, dim: Dim, n: u64, seed: u64) -> Result<OracleEstimate>
where
    F: Fn(&Point) -> bool + Sync,
{
    if n < MIN_SAMPLES {
        return Err(GeomError::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    let chunks = n.div_ceil(CHUNK);
    let hits: u64 =
        (0..chunks).into_par_iter().map(|c| count_chunk(member, bbox, dim, seed, c, CHUNK.min(n - c * CHUNK))).sum();
    let vol = bbox.measure(dim);
    let p = hits as f64 / n as f64;
    Ok(OracleEstimate { mean: p * vol, stderr: (p * (1.0 - p) / n as f64).sqrt() * vol, n_samples: n, seed })
}

/// Hit fraction times box volume in space.
pub fn mc_volume<F>(member: F, bbox: &BoundingBox, n: u64, seed: u64) -> Result<OracleEstimate>
where
    F: Fn(&Point) -> bool + Sync,
{
    estimate(&member, bbox, Dim::Three, n, seed)
}

/// Hit fraction times box area in the plane.
pub fn mc_area_2d<F>(member: F, bbox: &BoundingBox, n: u64, seed: u64) -> Result<OracleEstimate>
where
    F: Fn(&Point) -> bool + Sync,
{
    estimate(&member, bbox, Dim::Two, n, seed)
}

/// Estimate for a polytope using only its facet inequalities.
pub fn mc_polytope(p: &Polytope, n: u64, seed: u64) -> Result<OracleEstimate> {
    let bbox = BoundingBox::around(p);
    let member = |x: &Point| p.contains(x, 0.0);
    estimate(&member, &bbox, p.dim(), n, seed)
}
