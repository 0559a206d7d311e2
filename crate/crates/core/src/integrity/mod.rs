//! Integrity of `Q_n`: `min |S| + m(Q_n \ S)`.
//!
//! [`peel`] builds a separator by repeatedly cutting a sphere of radius
//! `r0` out of what is left of the cube, and records the run as an
//! [`IntegrityCertificate`] that [`verify`] re-derives from scratch.
//! [`exact_integrity`] is the brute-force value for tiny `n`, and
//! [`lemma_audit`] tabulates the normalised ball and sphere sizes at `r0`.

mod audit;
mod exact;
mod peel;
mod radius;

pub use audit::{lemma_audit, lemma_row, lemma_row_exact, LemmaRow};
pub use exact::{exact_integrity, naive_baseline, NaiveBaseline, EXACT_INTEGRITY_MAX_N};
pub use peel::{
    census, choose_center, peel, verify, Census, CenterChoice, IntegrityCertificate, PeelConfig,
    PeelStep, DEFAULT_SAMPLES,
};
pub use radius::{solve_radius, RadiusParams};

/// `value * sqrt(n) / (2^n sqrt(ln n))`.
pub fn rho(n: u32, value: u64) -> f64 {
    let n_f = f64::from(n);
    value as f64 * libm::sqrt(n_f) / (libm::exp2(n_f) * libm::sqrt(libm::log(n_f)))
}
