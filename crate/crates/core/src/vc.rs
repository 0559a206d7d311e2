//! Shattering, `Sh(F)`, VC dimension, and the extremal / maximal predicates.

use alloc::vec;
use alloc::vec::Vec;

use crate::binom::binom_leq_u64;
use crate::cube::{Family, SubsetMask};
use crate::error::{Error, Result};

/// `{ B ∩ S : B ∈ F }`, as a family over the same cube.
pub fn traces(f: &Family, s: SubsetMask) -> Family {
    let s = s.bits();
    let mut out = Family::empty(f.n()).expect("dimension already validated");
    for b in f.iter() {
        out.insert(b & s);
    }
    out
}

/// Positions of the set bits of `s`, low to high.
fn positions(s: u32) -> ([u8; 32], usize) {
    let mut pos = [0u8; 32];
    let mut len = 0;
    let mut rest = s;
    while rest != 0 {
        pos[len] = rest.trailing_zeros() as u8;
        rest &= rest - 1;
        len += 1;
    }
    (pos, len)
}

/// Counts distinct traces on `s`, keyed by the trace compressed to `|s|` bits.
fn shatters_raw(f: &Family, s: u32) -> bool {
    let (pos, len) = positions(s);
    let need = 1usize << len;
    if f.len() < need {
        return false;
    }
    let mut seen = vec![0u64; need.div_ceil(64)];
    let mut distinct = 0usize;
    for b in f.iter() {
        let t = b & s;
        let mut idx = 0usize;
        for (j, &p) in pos[..len].iter().enumerate() {
            idx |= ((t >> p) as usize & 1) << j;
        }
        let w = &mut seen[idx >> 6];
        let bit = 1u64 << (idx & 63);
        if *w & bit == 0 {
            *w |= bit;
            distinct += 1;
            if distinct == need {
                return true;
            }
        }
    }
    false
}

/// Whether `F` realises every subset of `S` as a trace.
pub fn shatters(f: &Family, s: SubsetMask) -> bool {
    !f.is_empty() && shatters_raw(f, s.bits())
}

/// `Sh(F)`. Built level by level: a set is only tested once all of its
/// one-smaller subsets are known to be shattered.
pub fn shattered_sets(f: &Family) -> Family {
    let n = f.n();
    let mut sh = Family::empty(n).expect("dimension already validated");
    if f.is_empty() {
        return sh;
    }
    sh.insert(0);
    let mut level = vec![0u32];
    for j in 1..=n {
        if (1usize << j) > f.len() {
            break;
        }
        let mut next = Vec::new();
        for &s in &level {
            let lowest_free = 32 - s.leading_zeros();
            for e in lowest_free..n {
                let t = s | 1 << e;
                let mut rest = s;
                let mut closed = true;
                while rest != 0 {
                    let b = rest & rest.wrapping_neg();
                    rest &= rest - 1;
                    if !sh.contains(t & !b) {
                        closed = false;
                        break;
                    }
                }
                if closed && shatters_raw(f, t) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        for &t in &next {
            sh.insert(t);
        }
        level = next;
    }
    sh
}

/// VC dimension; `-1` for the empty family.
pub fn vc_dim(f: &Family) -> i32 {
    shattered_sets(f).max_popcount().map_or(-1, |v| v as i32)
}

fn reject_empty(f: &Family) -> Result<()> {
    if f.is_empty() {
        return Err(Error::domain(
            "extremality is undefined for the empty family",
        ));
    }
    Ok(())
}

/// `|Sh(F)| = |F|`.
pub fn is_extremal(f: &Family) -> Result<bool> {
    reject_empty(f)?;
    Ok(shattered_sets(f).len() == f.len())
}

/// `|F| = C(n, <= VC(F))`.
pub fn is_maximal(f: &Family) -> Result<bool> {
    reject_empty(f)?;
    let vc = vc_dim(f) as u32;
    Ok(f.len() as u64 == binom_leq_u64(f.n(), vc))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcReport {
    pub vc: i32,
    /// `Sh(F)`, always a down-set.
    pub shattered: Family,
    pub extremal: bool,
    pub maximal: bool,
}

/// Everything `vc-engine` knows about `F` from a single `Sh(F)` pass. Both
/// predicates read `false` for the empty family.
pub fn vc_report(f: &Family) -> VcReport {
    let shattered = shattered_sets(f);
    let vc = shattered.max_popcount().map_or(-1, |v| v as i32);
    let nonempty = !f.is_empty();
    VcReport {
        extremal: nonempty && shattered.len() == f.len(),
        maximal: nonempty && f.len() as u64 == binom_leq_u64(f.n(), vc as u32),
        vc,
        shattered,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::layer;
    use proptest::prelude::*;

    fn fam(n: u32, masks: &[u32]) -> Family {
        Family::from_masks(n, masks.iter().copied()).unwrap()
    }

    fn s(n: u32, e: &[u32]) -> SubsetMask {
        SubsetMask::from_elements(n, e).unwrap()
    }

    /// Definition-level Sh(F): test every S directly through traces.
    fn shattered_naive(f: &Family) -> Family {
        let n = f.n();
        Family::from_masks(
            n,
            (0..1u32 << n).filter(|&m| {
                let t = traces(f, SubsetMask::new(n, m).unwrap());
                !f.is_empty()
                    && (0..1u32 << n)
                        .filter(|a| a & !m == 0)
                        .all(|a| t.contains(a))
            }),
        )
        .unwrap()
    }

    #[test]
    fn trace_examples() {
        assert!(traces(&Family::empty(3).unwrap(), s(3, &[1])).is_empty());
        let f = fam(2, &[0b00, 0b01, 0b10, 0b11]);
        assert_eq!(traces(&f, s(2, &[1, 2])).len(), 4);
        let t = traces(&fam(2, &[0b11]), s(2, &[1]));
        assert_eq!(t, fam(2, &[0b01]));
    }

    #[test]
    fn shatter_examples() {
        assert!(shatters(&fam(3, &[0b101]), s(3, &[])));
        assert!(!shatters(&Family::empty(3).unwrap(), s(3, &[])));
        assert!(shatters(&fam(2, &[0, 1, 2, 3]), s(2, &[1, 2])));
    }

    #[test]
    fn shattered_set_examples() {
        let down = fam(4, &[0, 1, 2, 4, 3, 5]);
        assert!(down.is_down_set());
        assert_eq!(shattered_sets(&down), down);
        assert_eq!(shattered_sets(&fam(3, &[0])), fam(3, &[0]));
        let full = Family::full(5).unwrap();
        assert_eq!(shattered_sets(&full), full);
    }

    #[test]
    fn vc_examples() {
        assert_eq!(vc_dim(&Family::full(5).unwrap()), 5);
        assert_eq!(vc_dim(&fam(3, &[0])), 0);
        assert_eq!(vc_dim(&fam(4, &[0b1011])), 0);
        assert_eq!(vc_dim(&Family::empty(4).unwrap()), -1);
    }

    #[test]
    fn extremal_examples() {
        let down = fam(3, &[0, 1, 2, 3, 4]);
        assert!(is_extremal(&down).unwrap());
        // {{1},{2}}: Sh = {∅,{1},{2}}
        let f = fam(2, &[0b01, 0b10]);
        assert_eq!(shattered_sets(&f), fam(2, &[0, 1, 2]));
        assert!(!is_extremal(&f).unwrap());
        assert!(is_extremal(&Family::full(4).unwrap()).unwrap());
        assert!(is_extremal(&Family::empty(2).unwrap()).is_err());
    }

    #[test]
    fn maximal_examples() {
        for n in 1..=6 {
            for k in 0..=n {
                let f =
                    Family::from_masks(n, (0..1u32 << n).filter(|m| m.count_ones() <= k)).unwrap();
                assert_eq!(vc_dim(&f), k as i32);
                assert!(is_maximal(&f).unwrap());
            }
        }
        // {∅,{1}} in n=2: VC 1, size 2 < 3
        let f = fam(2, &[0b00, 0b01]);
        assert_eq!(vc_dim(&f), 1);
        assert!(!is_maximal(&f).unwrap());
        assert!(is_maximal(&Family::full(3).unwrap()).unwrap());
        assert!(is_maximal(&Family::empty(2).unwrap()).is_err());
    }

    #[test]
    fn report_fields() {
        let r = vc_report(&Family::full(2).unwrap());
        assert_eq!(
            (r.vc, r.shattered.len(), r.extremal, r.maximal),
            (2, 4, true, true)
        );
        let r = vc_report(&Family::empty(2).unwrap());
        assert_eq!((r.vc, r.extremal, r.maximal), (-1, false, false));
    }

    #[test]
    fn pruned_matches_definition_exhaustive_n3() {
        for bits in 0u32..256 {
            let f = Family::from_masks(3, (0..8).filter(|i| bits >> i & 1 == 1)).unwrap();
            assert_eq!(shattered_sets(&f), shattered_naive(&f), "family {bits:#x}");
        }
    }

    #[test]
    fn layer_vc() {
        // a single layer k of Q_n with 0 < k < n shatters exactly sets of size <= min(k, n-k)
        let l = layer(5, 2).unwrap();
        assert_eq!(vc_dim(&l), 2);
    }

    fn random_family(n: u32, seed: u64) -> Family {
        let mut x = seed | 1;
        Family::from_masks(
            n,
            (0..1u32 << n).filter(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                x.is_multiple_of(3)
            }),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn pajor_and_sauer_shelah(n in 1u32..=6, seed in any::<u64>()) {
            let f = random_family(n, seed);
            prop_assume!(!f.is_empty());
            let sh = shattered_sets(&f);
            prop_assert!(sh.len() >= f.len());
            prop_assert!((f.len() as u64) <= binom_leq_u64(n, vc_dim(&f) as u32));
            prop_assert!(sh.is_down_set());
            if is_maximal(&f).unwrap() {
                prop_assert!(is_extremal(&f).unwrap());
            }
        }

        #[test]
        fn monotone_in_family(n in 1u32..=6, a in any::<u64>(), b in any::<u64>()) {
            let f = random_family(n, a);
            let g = f.union(&random_family(n, b));
            prop_assert!(shattered_sets(&f).is_subset(&shattered_sets(&g)));
        }

        #[test]
        fn matches_definition(n in 1u32..=5, seed in any::<u64>()) {
            let f = random_family(n, seed);
            prop_assert_eq!(shattered_sets(&f), shattered_naive(&f));
        }
    }
}
