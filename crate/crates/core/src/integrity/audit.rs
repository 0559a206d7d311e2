use alloc::vec::Vec;

use crate::binom::{binom, binom_leq, log_binom, log_binom_leq};
use crate::error::{Error, Result};

use super::radius::solve_radius;

/// Normalised ball and sphere sizes at radius `r0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaRow {
    pub n: u64,
    pub alpha: f64,
    pub r0: u64,
    /// `C(n, <=r0) sqrt(n) / (2^n sqrt(ln n))`.
    pub r1: f64,
    /// `C(n, r0) n / (2^n ln n)`.
    pub r2: f64,
    /// `C(n, <=r0) / C(n, r0) * sqrt(ln n) / sqrt(n)`.
    pub r3: f64,
}

fn check_n(n: u64) -> Result<()> {
    if n < 8 {
        return Err(Error::domain(alloc::format!(
            "lemma audit needs n >= 8, got {n}"
        )));
    }
    Ok(())
}

/// One row, in the natural-log domain.
pub fn lemma_row(n: u64) -> Result<LemmaRow> {
    check_n(n)?;
    let p = solve_radius(n)?;
    let ln_n = libm::log(n as f64);
    let ln_ln_n = libm::log(ln_n);
    let n_ln2 = n as f64 * core::f64::consts::LN_2;
    let ball = log_binom_leq(n, p.r0)?;
    let sphere = log_binom(n, p.r0)?;
    Ok(LemmaRow {
        n,
        alpha: p.alpha,
        r0: p.r0,
        r1: libm::exp(ball + 0.5 * ln_n - n_ln2 - 0.5 * ln_ln_n),
        r2: libm::exp(sphere + ln_n - n_ln2 - ln_ln_n),
        r3: libm::exp(ball - sphere + 0.5 * ln_ln_n - 0.5 * ln_n),
    })
}

/// The same row from exact big-integer binomials; `8 <= n <= 64`.
pub fn lemma_row_exact(n: u64) -> Result<LemmaRow> {
    check_n(n)?;
    if n > 64 {
        return Err(Error::domain("exact lemma rows stop at n = 64"));
    }
    let p = solve_radius(n)?;
    let ball = binom_leq(n, p.r0)?.to_f64();
    let sphere = binom(n, p.r0).to_f64();
    let cube = libm::exp2(n as f64);
    let n_f = n as f64;
    let ln_n = libm::log(n_f);
    Ok(LemmaRow {
        n,
        alpha: p.alpha,
        r0: p.r0,
        r1: ball * libm::sqrt(n_f) / (cube * libm::sqrt(ln_n)),
        r2: sphere * n_f / (cube * ln_n),
        r3: ball / sphere * libm::sqrt(ln_n) / libm::sqrt(n_f),
    })
}

pub fn lemma_audit(ns: &[u64]) -> Result<Vec<LemmaRow>> {
    ns.iter().map(|&n| lemma_row(n)).collect()
}
