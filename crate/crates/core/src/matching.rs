//! Induced matchings between layers `k` and `k+1` of `Q_n`, the injection
//! `phi` into maximal families of VC dimension `k`, its inverse, and the
//! "good" matchings used to count them from below.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::binom::{binom_u64, ExactCount};
use crate::cube::{check_dim, Family, SubsetMask};
use crate::error::{Error, Result};

/// `(lower, upper)` with `|lower| = k`, `|upper| = k + 1`.
pub type Edge = (SubsetMask, SubsetMask);

/// Guard on `n` for exhaustive matching enumeration.
pub const DEFAULT_MATCHING_MAX_N: u32 = 5;

/// A set of edges between layers `k` and `k+1`. Edges are kept sorted by
/// `(lower, upper)`, so two matchings with the same edge set compare equal.
/// Construction does not check the matching conditions; see
/// [`validate_matching`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InducedMatching {
    n: u32,
    k: u32,
    edges: Vec<Edge>,
}

impl InducedMatching {
    pub fn new(n: u32, k: u32, mut edges: Vec<Edge>) -> Result<Self> {
        check_dim(n)?;
        if k >= n {
            return Err(Error::domain(alloc::format!(
                "need k < n, got k={k}, n={n}"
            )));
        }
        if let Some(&(l, u)) = edges.iter().find(|(l, u)| l.n() != n || u.n() != n) {
            return Err(Error::domain(alloc::format!(
                "edge ({l:?}, {u:?}) is not over dimension {n}"
            )));
        }
        edges.sort_unstable();
        Ok(InducedMatching { n, k, edges })
    }

    pub fn empty(n: u32, k: u32) -> Result<Self> {
        Self::new(n, k, Vec::new())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// First reason a candidate fails to be an induced matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchingViolation {
    WrongLevel(Edge),
    NotAnEdge(Edge),
    SharedVertex(Edge, Edge),
    /// An endpoint of one edge is adjacent to an endpoint of the other.
    NotInduced(Edge, Edge),
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::WrongLevel((l, u)) => {
                write!(f, "edge ({l:?}, {u:?}) does not join the two layers")
            }
            MatchingViolation::NotAnEdge((l, u)) => write!(f, "{l:?} is not a subset of {u:?}"),
            MatchingViolation::SharedVertex(a, b) => {
                write!(f, "edges {a:?} and {b:?} share a vertex")
            }
            MatchingViolation::NotInduced(a, b) => {
                write!(f, "edges {a:?} and {b:?} are joined by a cube edge")
            }
        }
    }
}

/// Checks levels, the matching condition and the induced condition, in that
/// order, reporting the first violation.
pub fn validate_matching(m: &InducedMatching) -> core::result::Result<(), MatchingViolation> {
    for &(l, u) in &m.edges {
        if l.len() != m.k || u.len() != m.k + 1 {
            return Err(MatchingViolation::WrongLevel((l, u)));
        }
        if !l.is_subset_of(u) {
            return Err(MatchingViolation::NotAnEdge((l, u)));
        }
    }
    for (i, &a) in m.edges.iter().enumerate() {
        for &b in &m.edges[i + 1..] {
            if a.0 == b.0 || a.1 == b.1 {
                return Err(MatchingViolation::SharedVertex(a, b));
            }
        }
    }
    for (i, &a) in m.edges.iter().enumerate() {
        for &b in &m.edges[i + 1..] {
            if a.0.is_subset_of(b.1) || b.0.is_subset_of(a.1) {
                return Err(MatchingViolation::NotInduced(a, b));
            }
        }
    }
    Ok(())
}

/// The edges between layers `k` and `k+1`, sorted by `(lower, upper)`.
fn layer_edges(n: u32, k: u32) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for lower in (0..1u32 << n).filter(|m| m.count_ones() == k) {
        for e in 0..n {
            if lower >> e & 1 == 0 {
                edges.push((lower, lower | 1 << e));
            }
        }
    }
    edges
}

struct Frame {
    next: usize,
    blocked_lower: Family,
    blocked_upper: Family,
}

/// Depth-first stream of every induced matching between layers `k` and
/// `k+1`, the empty matching first. Edges are added in increasing order so
/// each matching appears once.
pub struct InducedMatchings {
    n: u32,
    k: u32,
    edges: Vec<(u32, u32)>,
    stack: Vec<Frame>,
    chosen: Vec<usize>,
    started: bool,
}

impl InducedMatchings {
    pub fn with_guard(n: u32, k: u32, max_n: u32) -> Result<Self> {
        check_dim(n)?;
        if k >= n {
            return Err(Error::domain(alloc::format!(
                "need k < n, got k={k}, n={n}"
            )));
        }
        if n > max_n {
            return Err(Error::resource("matching-max-n", n, max_n));
        }
        let empty = Family::empty(n)?;
        Ok(InducedMatchings {
            n,
            k,
            edges: layer_edges(n, k),
            stack: vec![Frame {
                next: 0,
                blocked_lower: empty.clone(),
                blocked_upper: empty,
            }],
            chosen: Vec::new(),
            started: false,
        })
    }

    fn current(&self) -> InducedMatching {
        let n = self.n;
        let mask = |b| SubsetMask::new(n, b).expect("layer masks are in range");
        InducedMatching {
            n,
            k: self.k,
            edges: self
                .chosen
                .iter()
                .map(|&i| (mask(self.edges[i].0), mask(self.edges[i].1)))
                .collect(),
        }
    }
}

impl Iterator for InducedMatchings {
    type Item = InducedMatching;

    fn next(&mut self) -> Option<InducedMatching> {
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        loop {
            let top = self.stack.last_mut()?;
            let found = (top.next..self.edges.len()).find(|&i| {
                let (l, u) = self.edges[i];
                !top.blocked_lower.contains(l) && !top.blocked_upper.contains(u)
            });
            let Some(i) = found else {
                self.stack.pop();
                self.chosen.pop();
                continue;
            };
            top.next = i + 1;
            let (l, u) = self.edges[i];
            let mut blocked_lower = top.blocked_lower.clone();
            let mut blocked_upper = top.blocked_upper.clone();
            for b in 0..self.n {
                let bit = 1u32 << b;
                if u & bit != 0 {
                    blocked_lower.insert(u & !bit);
                } else {
                    blocked_upper.insert(l | bit);
                }
            }
            self.stack.push(Frame {
                next: i + 1,
                blocked_lower,
                blocked_upper,
            });
            self.chosen.push(i);
            return Some(self.current());
        }
    }
}

/// [`InducedMatchings`] with the default guard `n <= 5`.
pub fn enumerate_induced_matchings(n: u32, k: u32) -> Result<InducedMatchings> {
    InducedMatchings::with_guard(n, k, DEFAULT_MATCHING_MAX_N)
}

/// All sets of size below `k`, the `k`-sets not covered by `M`, and the
/// `(k+1)`-sets covered by `M`.
pub fn phi(m: &InducedMatching) -> Result<Family> {
    validate_matching(m).map_err(|v| Error::domain(alloc::format!("invalid matching: {v}")))?;
    let (n, k) = (m.n, m.k);
    let mut f = Family::from_masks(n, (0..1u32 << n).filter(|x| x.count_ones() <= k))?;
    for &(l, u) in &m.edges {
        f.remove(l.bits());
        f.insert(u.bits());
    }
    Ok(f)
}

/// Recovers `M` from `phi(M)`. Every `(k+1)`-set in `F` is paired with its
/// unique `k`-subset missing from `F`; the result is validated and pushed
/// back through `phi`, so this also decides membership in the image.
pub fn reconstruct(f: &Family, k: u32) -> Result<InducedMatching> {
    let n = f.n();
    if k >= n {
        return Err(Error::domain(alloc::format!(
            "need k < n, got k={k}, n={n}"
        )));
    }
    let mask = |b| SubsetMask::new(n, b).expect("family members are in range");
    let mut edges = Vec::new();
    for upper in f.iter().filter(|u| u.count_ones() == k + 1) {
        let mut missing = (0..n)
            .filter(|b| upper >> b & 1 == 1)
            .map(|b| upper & !(1 << b))
            .filter(|&l| !f.contains(l));
        let (Some(lower), None) = (missing.next(), missing.next()) else {
            return Err(Error::NotInImage(alloc::format!(
                "{:?} does not have exactly one missing {k}-subset",
                mask(upper)
            )));
        };
        edges.push((mask(lower), mask(upper)));
    }
    let m = InducedMatching::new(n, k, edges)?;
    if let Err(v) = validate_matching(&m) {
        return Err(Error::NotInImage(alloc::format!("{v}")));
    }
    if phi(&m)? != *f {
        return Err(Error::NotInImage(
            "family differs from phi of its reconstructed matching".into(),
        ));
    }
    Ok(m)
}

/// Split of `[n]` into `A = {1..a}` and `B = [n] \ A` for good matchings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoodMatchingParams {
    n: u32,
    k: u32,
    a_size: u32,
}

impl GoodMatchingParams {
    /// `epsilon = num / den`; `epsilon * n` must be a positive integer.
    pub fn new(n: u32, k: u32, num: u32, den: u32) -> Result<Self> {
        if den == 0 || num >= den {
            return Err(Error::domain(alloc::format!(
                "epsilon {num}/{den} not in (0,1)"
            )));
        }
        let scaled = u64::from(n) * u64::from(num);
        if scaled % u64::from(den) != 0 {
            return Err(Error::domain(alloc::format!(
                "epsilon*n = {n}*{num}/{den} is not an integer"
            )));
        }
        Self::with_a_size(n, k, (scaled / u64::from(den)) as u32)
    }

    pub fn with_a_size(n: u32, k: u32, a_size: u32) -> Result<Self> {
        check_dim(n)?;
        if a_size < 1 {
            return Err(Error::domain("epsilon*n must be at least 1"));
        }
        if a_size >= n || n - a_size < k {
            return Err(Error::domain(alloc::format!(
                "|B| = {} must be at least k = {k}",
                n.saturating_sub(a_size)
            )));
        }
        Ok(GoodMatchingParams { n, k, a_size })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `|A| = epsilon * n`.
    pub fn a_size(&self) -> u32 {
        self.a_size
    }

    pub fn b_size(&self) -> u32 {
        self.n - self.a_size
    }
}

/// `|A| = max(1, floor(n / ((k^2 + 1) * ceil(log2 n))))`, capped so that
/// `|B| >= max(k, 1)`.
pub fn default_a_size(n: u32, k: u32) -> u32 {
    let log = (32 - n.saturating_sub(1).leading_zeros()).max(1);
    let a = (n / ((k * k + 1) * log)).max(1);
    a.min(n.saturating_sub(k.max(1))).max(1)
}

/// `(epsilon n)^C((1-epsilon) n, k)`.
pub fn count_good(p: &GoodMatchingParams) -> ExactCount {
    let lowers = binom_u64(p.b_size(), p.k);
    ExactCount::from(u64::from(p.a_size)).pow(lowers as u32)
}

/// Good matchings covering `binom(B, k)`: each `k`-subset `C` of `B` is
/// matched to `C ∪ {a}` for some `a ∈ A`, one matching per choice function.
pub struct GoodMatchings {
    p: GoodMatchingParams,
    lowers: Vec<u32>,
    digits: Vec<u32>,
    done: bool,
}

pub fn good_matchings(p: &GoodMatchingParams) -> GoodMatchings {
    let a = p.a_size;
    let lowers: Vec<u32> = (0..1u32 << p.n)
        .filter(|m| m & ((1 << a) - 1) == 0 && m.count_ones() == p.k)
        .collect();
    GoodMatchings {
        p: *p,
        digits: vec![0; lowers.len()],
        lowers,
        done: false,
    }
}

impl Iterator for GoodMatchings {
    type Item = InducedMatching;

    fn next(&mut self) -> Option<InducedMatching> {
        if self.done {
            return None;
        }
        let n = self.p.n;
        let mask = |b| SubsetMask::new(n, b).expect("in range");
        let edges = self
            .lowers
            .iter()
            .zip(&self.digits)
            .map(|(&l, &d)| (mask(l), mask(l | 1 << d)))
            .collect();
        // mixed-radix increment; wrapping past the last digit ends the stream
        self.done = true;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.p.a_size {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(InducedMatching::new(n, self.p.k, edges).expect("parameters validated"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom::binom_leq_u64;
    use crate::vc::{is_maximal, vc_dim};
    use alloc::collections::BTreeSet;

    fn s(n: u32, e: &[u32]) -> SubsetMask {
        SubsetMask::from_elements(n, e).unwrap()
    }

    fn matching(n: u32, k: u32, edges: &[(&[u32], &[u32])]) -> InducedMatching {
        InducedMatching::new(
            n,
            k,
            edges.iter().map(|(l, u)| (s(n, l), s(n, u))).collect(),
        )
        .unwrap()
    }

    /// All edge subsets, kept when they satisfy the definition directly.
    fn brute_force_induced(n: u32, k: u32) -> BTreeSet<Vec<Edge>> {
        let edges = layer_edges(n, k);
        assert!(edges.len() < 24);
        let mut out = BTreeSet::new();
        for pick in 0u32..1 << edges.len() {
            let chosen: Vec<(u32, u32)> = (0..edges.len())
                .filter(|i| pick >> i & 1 == 1)
                .map(|i| edges[i])
                .collect();
            let vertices: Vec<u32> = chosen.iter().flat_map(|&(l, u)| [l, u]).collect();
            let distinct: BTreeSet<u32> = vertices.iter().copied().collect();
            if distinct.len() != vertices.len() {
                continue;
            }
            // every cube edge among the endpoints must be one of the chosen edges
            let ok = vertices.iter().all(|&x| {
                vertices.iter().all(|&y| {
                    (x ^ y).count_ones() != 1
                        || chosen.contains(&(x.min(y), x.max(y)))
                        || chosen.contains(&(x & y, x | y))
                })
            });
            if ok {
                let mut es: Vec<Edge> = chosen
                    .iter()
                    .map(|&(l, u)| {
                        (
                            SubsetMask::new(n, l).unwrap(),
                            SubsetMask::new(n, u).unwrap(),
                        )
                    })
                    .collect();
                es.sort_unstable();
                out.insert(es);
            }
        }
        out
    }

    #[test]
    fn validate_examples() {
        assert!(validate_matching(&InducedMatching::empty(3, 1).unwrap()).is_ok());
        let shared = matching(2, 0, &[(&[], &[1]), (&[], &[2])]);
        assert!(matches!(
            validate_matching(&shared),
            Err(MatchingViolation::SharedVertex(..))
        ));
        let crossing = matching(3, 1, &[(&[1], &[1, 2]), (&[3], &[1, 3])]);
        assert!(matches!(
            validate_matching(&crossing),
            Err(MatchingViolation::NotInduced(..))
        ));
        let level = matching(3, 1, &[(&[], &[1])]);
        assert!(matches!(
            validate_matching(&level),
            Err(MatchingViolation::WrongLevel(..))
        ));
        let not_edge = matching(3, 1, &[(&[1], &[2, 3])]);
        assert!(matches!(
            validate_matching(&not_edge),
            Err(MatchingViolation::NotAnEdge(..))
        ));
    }

    #[test]
    fn enumeration_small_cases() {
        let all: Vec<_> = enumerate_induced_matchings(2, 0).unwrap().collect();
        assert_eq!(all.len(), 3);
        assert!(all[0].is_empty());
        assert_eq!(enumerate_induced_matchings(2, 1).unwrap().count(), 3);
        assert_eq!(enumerate_induced_matchings(3, 0).unwrap().count(), 4);
        assert!(matches!(
            enumerate_induced_matchings(6, 1),
            Err(Error::Resource { .. })
        ));
        assert!(enumerate_induced_matchings(3, 3).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (n, k) in [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (4, 0), (4, 3)] {
            let listed: Vec<Vec<Edge>> = enumerate_induced_matchings(n, k)
                .unwrap()
                .map(|m| m.edges().to_vec())
                .collect();
            let set: BTreeSet<_> = listed.iter().cloned().collect();
            assert_eq!(set.len(), listed.len(), "duplicates at ({n},{k})");
            assert_eq!(set, brute_force_induced(n, k), "({n},{k})");
        }
    }

    #[test]
    fn phi_examples() {
        let empty = InducedMatching::empty(4, 2).unwrap();
        let f = phi(&empty).unwrap();
        assert!(f.is_down_set());
        assert_eq!(f.len() as u64, binom_leq_u64(4, 2));

        let m = matching(2, 0, &[(&[], &[1])]);
        assert_eq!(phi(&m).unwrap(), Family::from_masks(2, [0b01]).unwrap());

        let m = matching(3, 1, &[(&[1], &[1, 2])]);
        let f = phi(&m).unwrap();
        assert_eq!(
            f,
            Family::from_masks(3, [0b000, 0b010, 0b100, 0b011]).unwrap()
        );
        assert_eq!(vc_dim(&f), 1);
        assert!(is_maximal(&f).unwrap());

        let bad = matching(2, 0, &[(&[], &[1]), (&[], &[2])]);
        assert!(phi(&bad).is_err());
    }

    #[test]
    fn reconstruct_examples() {
        let down = phi(&InducedMatching::empty(4, 1).unwrap()).unwrap();
        assert!(reconstruct(&down, 1).unwrap().is_empty());
        for m in enumerate_induced_matchings(4, 1).unwrap() {
            assert_eq!(reconstruct(&phi(&m).unwrap(), 1).unwrap(), m);
        }
        let f = Family::from_masks(2, [0b01, 0b10]).unwrap();
        assert!(matches!(reconstruct(&f, 0), Err(Error::NotInImage(_))));
        // a family with a member above level k+1 is not an image
        let f = Family::from_masks(3, [0, 1, 2, 4, 7]).unwrap();
        assert!(matches!(reconstruct(&f, 1), Err(Error::NotInImage(_))));
    }

    #[test]
    fn phi_blocks_the_missing_trace() {
        for (n, k) in [(3, 1), (4, 1), (4, 2)] {
            for m in enumerate_induced_matchings(n, k).unwrap() {
                let f = phi(&m).unwrap();
                for &(lower, upper) in m.edges() {
                    assert!(f.iter().all(|c| c & upper.bits() != lower.bits()));
                }
            }
        }
    }

    #[test]
    fn good_matching_counts() {
        let p = GoodMatchingParams::new(8, 1, 1, 4).unwrap();
        assert_eq!(count_good(&p), 64);
        assert_eq!(good_matchings(&p).count(), 64);
        let p = GoodMatchingParams::new(4, 1, 1, 4).unwrap();
        assert_eq!(count_good(&p), 1);
        assert_eq!(good_matchings(&p).count(), 1);
        let p = GoodMatchingParams::new(6, 1, 1, 3).unwrap();
        let all: Vec<_> = good_matchings(&p).collect();
        assert_eq!(all.len(), 16);
        assert!(all.iter().all(|m| validate_matching(m).is_ok()));
        let distinct: BTreeSet<_> = all.iter().map(|m| m.edges().to_vec()).collect();
        assert_eq!(distinct.len(), 16);
        let p = GoodMatchingParams::new(9, 2, 1, 3).unwrap();
        assert_eq!(count_good(&p), ExactCount::from(3u64).pow(15));
    }

    #[test]
    fn good_params_reject_bad_epsilon() {
        assert!(GoodMatchingParams::new(8, 1, 1, 16).is_err());
        assert!(GoodMatchingParams::new(8, 1, 1, 3).is_err());
        assert!(GoodMatchingParams::new(8, 1, 4, 4).is_err());
        assert!(GoodMatchingParams::new(4, 3, 1, 2).is_err());
        assert!(GoodMatchingParams::with_a_size(4, 1, 0).is_err());
    }

    #[test]
    fn default_a_size_is_valid() {
        for n in 2..=28 {
            for k in 0..n.min(4) {
                let a = default_a_size(n, k);
                assert!(
                    GoodMatchingParams::with_a_size(n, k, a).is_ok(),
                    "n={n} k={k} a={a}"
                );
            }
        }
        assert_eq!(default_a_size(64, 1), 64 / (2 * 6));
    }
}
