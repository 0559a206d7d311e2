use crate::error::{Error, Result};

/// Peeling radius: `alpha` solves `1 / (e^{2 alpha^2} alpha) = sqrt(ln n / n)`
/// and `r0 = floor(n/2 - alpha sqrt(n))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusParams {
    pub n: u64,
    pub alpha: f64,
    pub r0: u64,
    /// `|g(alpha)|` at the returned root.
    pub residual: f64,
}

const RESIDUAL_TOL: f64 = 1e-12;

/// Bisection on `[1e-6, sqrt(ln n)]`, where `g` is strictly decreasing.
pub fn solve_radius(n: u64) -> Result<RadiusParams> {
    if n < 3 {
        return Err(Error::domain(alloc::format!(
            "radius needs n >= 3, got {n}"
        )));
    }
    let n_f = n as f64;
    let target = libm::sqrt(libm::log(n_f) / n_f);
    let g = |a: f64| 1.0 / (libm::exp(2.0 * a * a) * a) - target;

    let (mut lo, mut hi) = (1e-6, libm::sqrt(libm::log(n_f)));
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return Err(Error::Solver(alloc::format!(
            "no sign change on [{lo}, {hi}] for n={n}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = if libm::fabs(g(lo)) <= libm::fabs(g(hi)) {
        lo
    } else {
        hi
    };
    let residual = libm::fabs(g(alpha));
    if residual > RESIDUAL_TOL {
        return Err(Error::Solver(alloc::format!(
            "residual {residual:e} for n={n}"
        )));
    }
    let r0 = libm::floor(n_f / 2.0 - alpha * libm::sqrt(n_f));
    if r0 < 0.0 {
        return Err(Error::domain(alloc::format!("r0 is negative for n={n}")));
    }
    Ok(RadiusParams {
        n,
        alpha,
        r0: r0 as u64,
        residual,
    })
}
