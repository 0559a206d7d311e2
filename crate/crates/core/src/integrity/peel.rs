use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::binom::binom_leq_u64;
use crate::cube::{check_dim, component_sets, max_component_size, Family, SubsetMask};
use crate::error::{Error, Result};

use super::radius::{solve_radius, RadiusParams};

pub const DEFAULT_SAMPLES: u32 = 32;

/// `|B_r0(x) ∩ F|` and `|S_r0(x) ∩ F|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub ball: usize,
    pub sphere: usize,
}

fn census_raw(f: &Family, x: u32, r0: u32) -> Census {
    let mut c = Census::default();
    for y in f.iter() {
        let d = (x ^ y).count_ones();
        if d <= r0 {
            c.ball += 1;
            c.sphere += (d == r0) as usize;
        }
    }
    c
}

/// Single scan of `F` counting members in the ball and on the sphere.
pub fn census(f: &Family, x: SubsetMask, r0: u32) -> Census {
    debug_assert_eq!(x.n(), f.n());
    census_raw(f, x.bits(), r0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelConfig {
    /// Uniform candidates per step, on top of the one drawn from `F`.
    pub samples: u32,
    pub seed: u64,
}

impl Default for PeelConfig {
    fn default() -> Self {
        PeelConfig {
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CenterChoice {
    pub center: SubsetMask,
    pub census: Census,
    pub candidates_sampled: u32,
}

/// `a` beats `b` when its sphere/ball ratio is smaller, lower mask on ties.
fn better(a: (u32, Census), b: (u32, Census)) -> bool {
    let lhs = a.1.sphere as u64 * b.1.ball as u64;
    let rhs = b.1.sphere as u64 * a.1.ball as u64;
    lhs < rhs || (lhs == rhs && a.0 < b.0)
}

fn choose_with(f: &Family, r0: u32, samples: u32, rng: &mut ChaCha8Rng) -> (u32, Census) {
    let n = f.n();
    let all = ((1u64 << n) - 1) as u32;
    let pick = rng.next_u64() % f.len() as u64;
    let fallback = f.nth_member(pick as usize).expect("index below |F|");
    let mut best = (fallback, census_raw(f, fallback, r0));
    for _ in 0..samples {
        let x = rng.next_u32() & all;
        let c = census_raw(f, x, r0);
        // a ball missing F makes no progress
        if c.ball > 0 && better((x, c), best) {
            best = (x, c);
        }
    }
    best
}

/// Best of `T` uniform centers plus one member of `F`, by smallest
/// `sphere_hits / ball_hits` among centers whose ball meets `F`.
pub fn choose_center(f: &Family, r0: u32, cfg: &PeelConfig) -> Result<CenterChoice> {
    if f.is_empty() {
        return Err(Error::domain("cannot choose a center for the empty family"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (x, c) = choose_with(f, r0, cfg.samples, &mut rng);
    Ok(CenterChoice {
        center: SubsetMask::new(f.n(), x)?,
        census: c,
        candidates_sampled: cfg.samples + 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub index: usize,
    pub center: SubsetMask,
    pub ball_hits: usize,
    pub sphere_hits: usize,
    pub candidates_sampled: u32,
}

/// A complete peeling run and the integrity upper bound it certifies.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrityCertificate {
    pub params: RadiusParams,
    pub samples: u32,
    pub seed: u64,
    pub steps: Vec<PeelStep>,
    /// `S_l`, the union of the sphere hits of all steps.
    pub separator: Family,
    pub separator_size: usize,
    pub max_component: usize,
    pub value: u64,
}

impl IntegrityCertificate {
    pub fn n(&self) -> u32 {
        self.params.n as u32
    }

    pub fn r0(&self) -> u32 {
        self.params.r0 as u32
    }

    /// Radii below 2 degrade to peeling single points and their neighbours.
    pub fn small_radius(&self) -> bool {
        self.params.r0 < 2
    }
}

/// Removes `B_r0(x) ∩ F` from `F` and adds `S_r0(x) ∩ F` to `separator`.
fn cut(f: &mut Family, separator: &mut Family, x: u32, r0: u32) -> Census {
    let hits: Vec<(u32, bool)> = f
        .iter()
        .filter_map(|y| {
            let d = (x ^ y).count_ones();
            (d <= r0).then_some((y, d == r0))
        })
        .collect();
    let mut c = Census::default();
    for (y, on_sphere) in hits {
        f.remove(y);
        c.ball += 1;
        if on_sphere {
            separator.insert(y);
            c.sphere += 1;
        }
    }
    c
}

/// Greedy sphere peeling from `F_0 = P(n)` until nothing is left.
pub fn peel(n: u32, cfg: &PeelConfig) -> Result<IntegrityCertificate> {
    check_dim(n)?;
    let params = solve_radius(u64::from(n))?;
    let r0 = params.r0 as u32;
    let mut rest = Family::full(n)?;
    let mut separator = Family::empty(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut steps = Vec::new();
    while !rest.is_empty() {
        let (x, chosen) = choose_with(&rest, r0, cfg.samples, &mut rng);
        let applied = cut(&mut rest, &mut separator, x, r0);
        debug_assert_eq!(chosen, applied);
        steps.push(PeelStep {
            index: steps.len(),
            center: SubsetMask::new(n, x)?,
            ball_hits: applied.ball,
            sphere_hits: applied.sphere,
            candidates_sampled: cfg.samples + 1,
        });
    }
    let max_component = max_component_size(&separator.complement());
    let separator_size = separator.len();
    Ok(IntegrityCertificate {
        params,
        samples: cfg.samples,
        seed: cfg.seed,
        steps,
        separator,
        separator_size,
        max_component,
        value: (separator_size + max_component) as u64,
    })
}

fn fail(msg: alloc::string::String) -> Error {
    Error::Verification(msg)
}

/// Re-derives everything a certificate claims and returns the audited
/// value `|S| + m(Q_n \ S)`.
///
/// The peel is replayed from the recorded centers to check every step's
/// counts and that the separator is exactly the union of sphere hits. The
/// components of the complement are then recomputed; each must sit inside
/// the radius-`r0` ball of some recorded center and be no larger than
/// `C(n, <=r0)`.
pub fn verify(cert: &IntegrityCertificate) -> Result<u64> {
    let n = cert.separator.n();
    if u64::from(n) != cert.params.n {
        return Err(fail(alloc::format!(
            "separator is over n={n}, header says n={}",
            cert.params.n
        )));
    }
    let expected = solve_radius(cert.params.n)?;
    if expected.r0 != cert.params.r0 || libm::fabs(expected.alpha - cert.params.alpha) > 1e-12 {
        return Err(fail(alloc::format!(
            "radius mismatch: certificate has alpha={} r0={}, expected alpha={} r0={}",
            cert.params.alpha,
            cert.params.r0,
            expected.alpha,
            expected.r0
        )));
    }
    let r0 = expected.r0 as u32;

    let mut rest = Family::full(n)?;
    let mut union = Family::empty(n)?;
    let mut total = 0usize;
    for (i, step) in cert.steps.iter().enumerate() {
        if step.index != i || step.center.n() != n {
            return Err(fail(alloc::format!("step {i} is malformed")));
        }
        let c = cut(&mut rest, &mut union, step.center.bits(), r0);
        if c.ball == 0 {
            return Err(fail(alloc::format!("step {i} removes nothing")));
        }
        if c.ball != step.ball_hits || c.sphere != step.sphere_hits {
            return Err(fail(alloc::format!(
                "step {i} at {:?}: recorded ({}, {}), replayed ({}, {})",
                step.center,
                step.ball_hits,
                step.sphere_hits,
                c.ball,
                c.sphere
            )));
        }
        total += c.ball;
    }
    if !rest.is_empty() || total != 1usize << n {
        return Err(fail(alloc::format!(
            "ball hits sum to {total}, expected 2^{n} = {}",
            1usize << n
        )));
    }
    if union != cert.separator {
        let missing = union.difference(&cert.separator);
        let extra = cert.separator.difference(&union);
        return Err(fail(alloc::format!(
            "separator differs from the union of sphere hits: {} missing (first {:?}), {} extra (first {:?})",
            missing.len(),
            missing.masks().next(),
            extra.len(),
            extra.masks().next()
        )));
    }

    let cap = binom_leq_u64(n, r0) as usize;
    let mut largest = 0usize;
    for comp in component_sets(&cert.separator.complement()) {
        let first = comp[0];
        let inside = cert.steps.iter().any(|s| {
            let x = s.center.bits();
            (x ^ first).count_ones() <= r0 && comp.iter().all(|&y| (x ^ y).count_ones() <= r0)
        });
        if !inside {
            return Err(fail(alloc::format!(
                "component of size {} containing {:?} is not inside any recorded ball",
                comp.len(),
                SubsetMask::new(n, first)?
            )));
        }
        if comp.len() > cap {
            return Err(fail(alloc::format!(
                "component containing {:?} has {} vertices, above C({n}, <={r0}) = {cap}",
                SubsetMask::new(n, first)?,
                comp.len()
            )));
        }
        largest = largest.max(comp.len());
    }
    let audited = (cert.separator.len() + largest) as u64;
    if audited != cert.value
        || cert.separator_size != cert.separator.len()
        || cert.max_component != largest
    {
        return Err(fail(alloc::format!(
            "claimed value {} (separator {}, component {}), audited {audited} (separator {}, component {largest})",
            cert.value,
            cert.separator_size,
            cert.max_component,
            cert.separator.len()
        )));
    }
    Ok(audited)
}
