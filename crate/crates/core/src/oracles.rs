//! Brute-force counts of `m(n,k)`, `ExVC(n,k)`, `IndMat(n,k)` and
//! `Conn(n,m)` for small `n`, and the log-domain bound formulas.
//!
//! Every oracle counts nonempty families only. Budgets fail deterministically
//! before any work is done whenever the candidate space is known up front.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::binom::{binom, binom_leq, binom_leq_u64, log_binom, log_binom_leq, ExactCount};
use crate::cube::{check_dim, Family};
use crate::error::{Error, Result};
use crate::matching::InducedMatchings;
use crate::vc::{shattered_sets, vc_dim};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Progress callbacks fire once per this many candidates.
pub const PROGRESS_INTERVAL: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of candidates any single oracle may examine.
    pub budget: u64,
    pub exvc_max_n: u32,
    pub indmat_max_n: u32,
    pub conn_max_n: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: DEFAULT_BUDGET,
            exvc_max_n: 4,
            indmat_max_n: 5,
            conn_max_n: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub count: ExactCount,
    pub candidates: u64,
}

/// One slice of a candidate space: candidate `i` belongs to shard
/// `i % count == index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl Shard {
    pub const WHOLE: Shard = Shard { index: 0, count: 1 };

    #[inline]
    fn owns(self, i: u64) -> bool {
        i % self.count == self.index
    }
}

fn check_budget(guard: &'static str, needed: &BigUint, budget: u64) -> Result<u64> {
    let limit = BigUint::from(budget);
    if *needed > limit {
        return Err(Error::resource(guard, needed, budget));
    }
    Ok(u64::try_from(needed).expect("bounded by budget"))
}

fn check_k(n: u32, k: u32) -> Result<()> {
    check_dim(n)?;
    if k > n {
        return Err(Error::domain(alloc::format!("k={k} exceeds n={n}")));
    }
    Ok(())
}

/// `m(n,k)` by testing every family of size `C(n, <=k)` in colex order.
pub fn exact_m(n: u32, k: u32, cfg: &OracleConfig) -> Result<OracleOutcome> {
    exact_m_sharded(n, k, cfg, Shard::WHOLE, &mut |_| {})
}

/// [`exact_m`] restricted to one shard. Shard totals add up to the
/// unsharded count for any shard count.
pub fn exact_m_sharded(
    n: u32,
    k: u32,
    cfg: &OracleConfig,
    shard: Shard,
    progress: &mut dyn FnMut(u64),
) -> Result<OracleOutcome> {
    check_k(n, k)?;
    if shard.count == 0 || shard.index >= shard.count {
        return Err(Error::domain("shard index out of range"));
    }
    let universe = 1u64 << n;
    let size = binom_leq_u64(n, k) as usize;
    let total = check_budget("budget", binom(universe, size as u64).value(), cfg.budget)?;

    let mut comb: Vec<u32> = (0..size as u32).collect();
    let mut examined = 0u64;
    let mut found = 0u64;
    for i in 0..total {
        if shard.owns(i) {
            let f = Family::from_masks(n, comb.iter().copied()).expect("masks below 2^n");
            if vc_dim(&f) == k as i32 {
                found += 1;
            }
            examined += 1;
            if examined.is_multiple_of(PROGRESS_INTERVAL) {
                progress(examined);
            }
        }
        next_colex(&mut comb, universe as u32);
    }
    Ok(OracleOutcome {
        count: found.into(),
        candidates: examined,
    })
}

/// Advances to the next combination in colex order; returns false after the last.
fn next_colex(comb: &mut [u32], universe: u32) -> bool {
    let s = comb.len();
    for j in 0..s {
        let limit = if j + 1 < s { comb[j + 1] } else { universe };
        if comb[j] + 1 < limit {
            comb[j] += 1;
            for (i, c) in comb[..j].iter_mut().enumerate() {
                *c = i as u32;
            }
            return true;
        }
    }
    false
}

/// `ExVC(n,k)`: nonempty extremal families of VC dimension at most `k`.
pub fn exact_exvc(n: u32, k: u32, cfg: &OracleConfig) -> Result<OracleOutcome> {
    check_k(n, k)?;
    if n > cfg.exvc_max_n {
        return Err(Error::resource("exvc-max-n", n, cfg.exvc_max_n));
    }
    let families = (BigUint::from(1u8) << (1usize << n)) - 1u8;
    let total = check_budget("budget", &families, cfg.budget)?;
    let mut found = 0u64;
    for bits in 1..=total {
        let f = Family::from_words(n, vec![bits]).expect("n <= 6");
        let sh = shattered_sets(&f);
        if sh.len() == f.len() && sh.max_popcount().unwrap_or(0) <= k {
            found += 1;
        }
    }
    Ok(OracleOutcome {
        count: found.into(),
        candidates: total,
    })
}

/// `IndMat(n,k)`, counting the empty matching.
pub fn exact_indmat(n: u32, k: u32, cfg: &OracleConfig) -> Result<OracleOutcome> {
    let mut count = 0u64;
    for _ in InducedMatchings::with_guard(n, k, cfg.indmat_max_n)? {
        count += 1;
        if count > cfg.budget {
            return Err(Error::resource(
                "budget",
                alloc::format!("more than {}", cfg.budget),
                cfg.budget,
            ));
        }
    }
    Ok(OracleOutcome {
        count: count.into(),
        candidates: count,
    })
}

/// Number of connected induced subgraphs of `Q_n` on each vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnProfile {
    /// `by_size[m] = Conn(n, m)`; `Conn(n, 0) = 0`.
    pub by_size: Vec<ExactCount>,
    pub candidates: u64,
}

/// Every connected vertex set of `Q_n`, each generated once from its
/// smallest vertex: a branch either takes the next frontier vertex or
/// forbids it for the rest of the branch.
pub fn conn_profile(n: u32, cfg: &OracleConfig) -> Result<ConnProfile> {
    check_dim(n)?;
    if n > cfg.conn_max_n || n > 6 {
        return Err(Error::resource("conn-max-n", n, cfg.conn_max_n.min(6)));
    }
    let order = 1usize << n;
    let nbr: Vec<u64> = (0..order)
        .map(|v| (0..n).fold(0u64, |acc, b| acc | 1 << (v ^ (1 << b))))
        .collect();
    let mut counts = vec![0u64; order + 1];
    let mut visited = 0u64;
    for v in 0..order {
        let below = (1u64 << v) - 1;
        grow(
            1 << v,
            1,
            nbr[v] & !below,
            below,
            &nbr,
            &mut counts,
            &mut visited,
            cfg.budget,
        )?;
    }
    Ok(ConnProfile {
        by_size: counts.into_iter().map(ExactCount::from).collect(),
        candidates: visited,
    })
}

#[allow(clippy::too_many_arguments)]
fn grow(
    set: u64,
    size: usize,
    frontier: u64,
    forbidden: u64,
    nbr: &[u64],
    counts: &mut [u64],
    visited: &mut u64,
    budget: u64,
) -> Result<()> {
    counts[size] += 1;
    *visited += 1;
    if *visited > budget {
        return Err(Error::resource(
            "budget",
            alloc::format!("more than {budget}"),
            budget,
        ));
    }
    let mut excluded = forbidden;
    let mut rest = frontier;
    while rest != 0 {
        let w = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let next = set | 1 << w;
        let next_frontier = rest | (nbr[w] & !next & !excluded & !frontier);
        grow(
            next,
            size + 1,
            next_frontier,
            excluded,
            nbr,
            counts,
            visited,
            budget,
        )?;
        excluded |= 1 << w;
    }
    Ok(())
}

/// `Conn(n, m)`.
pub fn exact_conn(n: u32, m: u32, cfg: &OracleConfig) -> Result<OracleOutcome> {
    check_dim(n)?;
    if u64::from(m) > 1u64 << n {
        return Err(Error::domain(alloc::format!("m={m} exceeds 2^{n}")));
    }
    let profile = conn_profile(n, cfg)?;
    Ok(OracleOutcome {
        count: profile.by_size[m as usize].clone(),
        candidates: profile.candidates,
    })
}

/// Natural-log values of the counting bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub k: u64,
    /// `|A| = floor(epsilon * n)`.
    pub a_size: u64,
    /// `C(n - |A|, k) * ln |A|`: log of the good-matching count.
    pub log_lower: f64,
    /// `(n+1) ln 2 + C(n, <=k) (1 + ln n)`: log of `2^{n+1} (en)^{C(n,<=k)}`.
    pub log_upper: f64,
    /// `C(n,k) ln n`.
    pub log_target: f64,
}

fn binom_f64(n: u64, k: u64) -> f64 {
    if k <= 64 || n - k <= 64 {
        binom(n, k).to_f64()
    } else {
        libm::exp(log_binom(n, k).expect("k <= n"))
    }
}

fn binom_leq_f64(n: u64, k: u64) -> f64 {
    if k <= 64 {
        binom_leq(n, k).expect("k <= n").to_f64()
    } else {
        libm::exp(log_binom_leq(n, k).expect("k <= n"))
    }
}

/// Bound formulas at `epsilon = num / den`, with `|A| = floor(epsilon n)`.
pub fn bound_report(n: u64, k: u64, num: u64, den: u64) -> Result<BoundReport> {
    if den == 0 || num == 0 || num >= den {
        return Err(Error::domain(alloc::format!(
            "epsilon {num}/{den} not in (0,1)"
        )));
    }
    let a_size = n * num / den;
    if a_size < 1 {
        return Err(Error::domain(alloc::format!(
            "epsilon*n = {n}*{num}/{den} < 1"
        )));
    }
    if k > n - a_size {
        return Err(Error::domain(alloc::format!(
            "k={k} exceeds |B|={}",
            n - a_size
        )));
    }
    let ln_n = libm::log(n as f64);
    Ok(BoundReport {
        n,
        k,
        a_size,
        log_lower: binom_f64(n - a_size, k) * libm::log(a_size as f64),
        log_upper: (n + 1) as f64 * core::f64::consts::LN_2 + binom_leq_f64(n, k) * (1.0 + ln_n),
        log_target: binom_f64(n, k) * ln_n,
    })
}
