//! Exact binomial sums and their natural-log counterparts.

use core::fmt;
use core::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact non-negative count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactCount(BigUint);

impl ExactCount {
    pub fn zero() -> Self {
        ExactCount(BigUint::zero())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Nearest double; `inf` past `f64::MAX`.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn pow(&self, exp: u32) -> Self {
        ExactCount(num_traits::pow(self.0.clone(), exp as usize))
    }
}

impl From<u64> for ExactCount {
    fn from(v: u64) -> Self {
        ExactCount(BigUint::from(v))
    }
}

impl From<BigUint> for ExactCount {
    fn from(v: BigUint) -> Self {
        ExactCount(v)
    }
}

impl PartialEq<u64> for ExactCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl Add for ExactCount {
    type Output = ExactCount;
    fn add(self, rhs: Self) -> Self {
        ExactCount(self.0 + rhs.0)
    }
}

impl AddAssign<&ExactCount> for ExactCount {
    fn add_assign(&mut self, rhs: &ExactCount) {
        self.0 += &rhs.0;
    }
}

impl core::iter::Sum for ExactCount {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExactCount::zero(), Add::add)
    }
}

impl fmt::Display for ExactCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

fn check_level(n: u64, k: u64) -> Result<()> {
    if k > n {
        return Err(Error::domain(alloc::format!("level k={k} exceeds n={n}")));
    }
    Ok(())
}

/// `C(n, k)`, zero when `k > n`.
pub fn binom(n: u64, k: u64) -> ExactCount {
    if k > n {
        return ExactCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    ExactCount(acc)
}

/// `C(n, <=k) = sum_{i<=k} C(n, i)`.
pub fn binom_leq(n: u64, k: u64) -> Result<ExactCount> {
    check_level(n, k)?;
    let mut term = BigUint::one();
    let mut acc = BigUint::one();
    for i in 0..k {
        term *= n - i;
        term /= i + 1;
        acc += &term;
    }
    Ok(ExactCount(acc))
}

/// Machine-word `C(n, k)` for `n <= 62`.
pub fn binom_u64(n: u32, k: u32) -> u64 {
    assert!(n <= 62, "binom_u64 only covers n <= 62");
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1)) as u64
}

/// Machine-word `C(n, <=k)` for `n <= 62`.
pub fn binom_leq_u64(n: u32, k: u32) -> u64 {
    (0..=k.min(n)).map(|i| binom_u64(n, i)).sum()
}

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x)` for `x > 0`.
///
/// Shifts the argument up to at least 15 with the recurrence
/// `Γ(x+1) = xΓ(x)` and then evaluates the Stirling series.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut shift = 0.0;
    let mut z = x;
    let mut prod = 1.0;
    while z < 15.0 {
        prod *= z;
        z += 1.0;
        if prod > 1e280 {
            shift += libm::log(prod);
            prod = 1.0;
        }
    }
    shift += libm::log(prod);
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2j} / (2j (2j-1) z^{2j-1}), j = 1..6
    let series = inv
        * (1.0 / 12.0
            - inv2
                * (1.0 / 360.0
                    - inv2
                        * (1.0 / 1260.0
                            - inv2
                                * (1.0 / 1680.0
                                    - inv2 * (1.0 / 1188.0 - inv2 * (691.0 / 360_360.0))))));
    (z - 0.5) * libm::log(z) - z + HALF_LN_2PI + series - shift
}

/// `ln C(n, k)` via log-gamma; works for `n` far beyond [`MAX_DIM`](crate::MAX_DIM).
pub fn log_binom(n: u64, k: u64) -> Result<f64> {
    check_level(n, k)?;
    if k == 0 || k == n {
        return Ok(0.0);
    }
    let (n, k) = (n as f64, k as f64);
    Ok(ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0))
}

/// `ln C(n, <=k)` without materialising any big integer.
pub fn log_binom_leq(n: u64, k: u64) -> Result<f64> {
    check_level(n, k)?;
    let ln2 = core::f64::consts::LN_2;
    if k == n {
        return Ok(n as f64 * ln2);
    }
    if 2 * k >= n {
        // sum_{i<=k} = 2^n - sum_{j<=n-k-1}
        let rest = lower_tail(n, n - k - 1);
        let frac = libm::exp(rest - n as f64 * ln2);
        return Ok(n as f64 * ln2 + libm::log1p(-frac));
    }
    Ok(lower_tail(n, k))
}

/// `ln sum_{i<=k} C(n,i)` for `2k < n`, where terms shrink going down.
fn lower_tail(n: u64, k: u64) -> f64 {
    let top = log_binom(n, k).expect("k <= n");
    let mut sum = 1.0;
    let mut rel = 1.0;
    let mut i = k;
    while i > 0 {
        // C(n, i-1) / C(n, i)
        let q = i as f64 / (n - i + 1) as f64;
        rel *= q;
        sum += rel;
        i -= 1;
        if q < 1.0 && rel * q / (1.0 - q) < 1e-18 * sum {
            break;
        }
    }
    top + libm::log(sum)
}
