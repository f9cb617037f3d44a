//! Numerical tolerances shared by the whole crate.
//!
//! `tol_geom` governs hull construction, deduplication and membership; it is
//! process-wide so that a binary can override it once at startup. Certificate
//! and equality tolerances travel explicitly in [`CertConfig`](crate::certificates::CertConfig).

use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_TOL_GEOM: f64 = 1e-9;
pub const DEFAULT_TOL_CERT: f64 = 1e-7;
pub const DEFAULT_EQ_TOL: f64 = 1e-6;

// f64 bits of 1e-9
static TOL_GEOM_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695);

/// Current geometric tolerance.
pub fn tol_geom() -> f64 {
    f64::from_bits(TOL_GEOM_BITS.load(Ordering::Relaxed))
}

/// Overrides the geometric tolerance for the rest of the process.
pub fn set_tol_geom(tol: f64) {
    assert!(tol.is_finite() && tol > 0.0, "tolerance must be positive");
    TOL_GEOM_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

/// Absolute tolerance for a configuration whose bounding-box diameter is `diameter`.
pub fn scaled_tol(diameter: f64) -> f64 {
    tol_geom() * (1.0 + diameter)
}
