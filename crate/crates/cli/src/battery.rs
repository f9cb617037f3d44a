//! Property checks run by `volprod check`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use volprod::body_ops::{central_section, difference_body, polar, volume_product, PlaneBasis};
use volprod::certificates::{
    chain_lower_bound, check_section_projection_duality, partition_3d, plane_certificate, sample_zang, CertConfig,
    InequalityCheck, Relation,
};
use volprod::oracle::mc_polytope;
use volprod::symmetry::is_tetrahedrally_symmetric;
use volprod::{Dim, Point, Polytope, Result};

/// Standard errors allowed between a Monte-Carlo estimate and the exact volume.
pub const ORACLE_SIGMAS: f64 = 4.0;
/// Relative tolerance for exact identities (tiling, duality, binomial bound).
pub const IDENTITY_TOL: f64 = 1e-9;
pub const RANDOM_DUALITY_DIRECTIONS: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct BatteryConfig {
    pub seed: u64,
    pub directions: usize,
    pub samples: u64,
    pub cert: CertConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct Battery {
    pub checks: Vec<InequalityCheck>,
    /// Checks that do not apply to this body, with the reason.
    pub skipped: Vec<String>,
}

impl Battery {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

fn fmt_dir(u: &Point) -> String {
    format!("({:.3},{:.3},{:.3})", u.x(), u.y(), u.z())
}

pub fn run(k: &Polytope, cfg: &BatteryConfig) -> Result<Battery> {
    let tol = cfg.cert.tol_cert;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let d = difference_body(k);
    let lp = polar(&d)?;
    let product = volume_product(k);

    let z = sample_zang(k, cfg.directions, cfg.seed, tol)?;
    checks.push(InequalityCheck::new("zang_min_margin", Relation::Ge, z.min_margin, 0.0, tol * k.volume().max(1.0)));

    match k.dim() {
        Dim::Two => {
            let cert = plane_certificate(k, &cfg.cert)?;
            let total = 2.0 * (cert.s1 + cert.s2 + cert.s3);
            checks.push(InequalityCheck::new(
                "tiling_sectors",
                Relation::Eq,
                total,
                cert.polar_area,
                IDENTITY_TOL * cert.polar_area,
            ));
            skipped.push("duality: planar body".to_string());
        }
        Dim::Three => {
            let mut dirs = vec![Point::new3(0.0, 0.0, 1.0), Point::new3(1.0, 1.0, 1.0)];
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(1);
            while dirs.len() < 2 + RANDOM_DUALITY_DIRECTIONS {
                let u = Point::new3(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                );
                if u.norm() > 1e-6 {
                    dirs.push(u);
                }
            }
            for u in &dirs {
                let residual = check_section_projection_duality(k, u)?;
                let area = central_section(&lp, &PlaneBasis::new(*u)?)?.volume();
                let name = format!("duality u={}", fmt_dir(u));
                checks.push(InequalityCheck::new(&name, Relation::Le, residual, IDENTITY_TOL * area, 0.0));
            }
            if is_tetrahedrally_symmetric(k, tol) {
                let part = partition_3d(&lp, tol)?;
                checks.push(InequalityCheck::new(
                    "tiling_pieces",
                    Relation::Eq,
                    part.v1 + part.v2,
                    lp.volume(),
                    IDENTITY_TOL * lp.volume(),
                ));
            } else {
                skipped.push("tiling: body lacks tetrahedral symmetry".to_string());
            }
        }
    }

    let chain = chain_lower_bound(k);
    let binom = k.dim().central_binomial();
    checks.push(InequalityCheck::new("rs_ratio", Relation::Le, chain.rs_ratio, binom, IDENTITY_TOL));
    checks.push(InequalityCheck::new("chain_value", Relation::Le, chain.value, product, tol));

    for (name, body) in [("oracle_volume", k), ("oracle_polar_volume", &lp)] {
        let est = mc_polytope(body, cfg.samples, cfg.seed)?;
        let gap = (est.mean - body.volume()).abs();
        checks.push(InequalityCheck::new(name, Relation::Le, gap, ORACLE_SIGMAS * est.stderr, 0.0));
    }

    Ok(Battery { checks, skipped })
}
