//! Vertices, families, layers, balls, spheres and components of `Q_n`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest ambient dimension for which a dense [`Family`] is built.
pub const MAX_DIM: u32 = 28;

pub(crate) fn check_dim(n: u32) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::domain(alloc::format!(
            "dimension n={n} outside 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

/// One vertex of `Q_n`, i.e. one subset of `[n]`.
///
/// Bit `i` stands for ground element `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    // field order gives ordering by bits first
    bits: u32,
    n: u8,
}

impl SubsetMask {
    pub fn new(n: u32, bits: u32) -> Result<Self> {
        check_dim(n)?;
        if u64::from(bits) >> n != 0 {
            return Err(Error::domain(alloc::format!(
                "mask {bits:#x} has bits above position {}",
                n - 1
            )));
        }
        Ok(SubsetMask { bits, n: n as u8 })
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::new(n, 0)
    }

    /// Builds a mask from 1-indexed ground elements.
    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self> {
        check_dim(n)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::domain(alloc::format!("element {e} not in [1, {n}]")));
            }
            bits |= 1 << (e - 1);
        }
        Self::new(n, bits)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn n(self) -> u32 {
        u32::from(self.n)
    }

    /// Cardinality of the subset.
    #[inline]
    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    /// 1-indexed elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        BitIter(u64::from(self.bits)).map(|i| i + 1)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Hamming distance between two vertices of the same cube.
pub fn hamming(x: SubsetMask, y: SubsetMask) -> Result<u32> {
    if x.n != y.n {
        return Err(Error::domain(alloc::format!(
            "hamming between masks of dimension {} and {}",
            x.n,
            y.n
        )));
    }
    Ok((x.bits ^ y.bits).count_ones())
}

/// A family of subsets of `[n]` as a `2^n`-bit characteristic vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: u32,
    words: Vec<u64>,
    size: usize,
}

#[inline]
fn word_count(n: u32) -> usize {
    (1usize << n).div_ceil(64)
}

#[inline]
fn tail_mask(n: u32) -> u64 {
    if n >= 6 {
        !0
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

impl Family {
    pub fn empty(n: u32) -> Result<Self> {
        check_dim(n)?;
        Ok(Family {
            n,
            words: vec![0; word_count(n)],
            size: 0,
        })
    }

    /// All of `P(n)`.
    pub fn full(n: u32) -> Result<Self> {
        check_dim(n)?;
        let mut words = vec![!0u64; word_count(n)];
        *words.last_mut().unwrap() = tail_mask(n);
        Ok(Family {
            n,
            words,
            size: 1usize << n,
        })
    }

    /// Builds a family from raw masks; duplicates collapse.
    pub fn from_masks<I: IntoIterator<Item = u32>>(n: u32, masks: I) -> Result<Self> {
        let mut f = Family::empty(n)?;
        for m in masks {
            if u64::from(m) >> n != 0 {
                return Err(Error::domain(alloc::format!(
                    "mask {m:#x} out of range for n={n}"
                )));
            }
            f.insert(m);
        }
        Ok(f)
    }

    /// Builds a family from its characteristic words; bit `i` of word `w`
    /// is membership of mask `64 * w + i`.
    pub fn from_words(n: u32, words: Vec<u64>) -> Result<Self> {
        check_dim(n)?;
        if words.len() != word_count(n) {
            return Err(Error::domain(alloc::format!(
                "expected {} words for n={n}, got {}",
                word_count(n),
                words.len()
            )));
        }
        if words.last().unwrap() & !tail_mask(n) != 0 {
            return Err(Error::domain("characteristic vector has bits past 2^n"));
        }
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(Family { n, words, size })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, mask: u32) -> bool {
        let i = mask as usize;
        i < (1usize << self.n) && self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn contains_mask(&self, mask: SubsetMask) -> bool {
        mask.n() == self.n && self.contains(mask.bits)
    }

    /// Returns true when the mask was not already present.
    #[inline]
    pub fn insert(&mut self, mask: u32) -> bool {
        let i = mask as usize;
        debug_assert!(i < (1usize << self.n));
        let w = &mut self.words[i >> 6];
        let bit = 1u64 << (i & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.size += fresh as usize;
        fresh
    }

    /// Returns true when the mask was present.
    #[inline]
    pub fn remove(&mut self, mask: u32) -> bool {
        let i = mask as usize;
        debug_assert!(i < (1usize << self.n));
        let w = &mut self.words[i >> 6];
        let bit = 1u64 << (i & 63);
        let present = *w & bit != 0;
        *w &= !bit;
        self.size -= present as usize;
        present
    }

    /// Members in increasing mask order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| BitIter(word).map(move |b| (w as u32) << 6 | b))
    }

    pub fn masks(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        let n = self.n as u8;
        self.iter().map(move |bits| SubsetMask { bits, n })
    }

    /// The `index`-th member in increasing mask order.
    pub fn nth_member(&self, mut index: usize) -> Option<u32> {
        for (w, &word) in self.words.iter().enumerate() {
            let c = word.count_ones() as usize;
            if index < c {
                return BitIter(word).nth(index).map(|b| (w as u32) << 6 | b);
            }
            index -= c;
        }
        None
    }

    fn zip_with(&self, other: &Family, op: impl Fn(u64, u64) -> u64) -> Family {
        assert_eq!(self.n, other.n, "families over different cubes");
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        Family {
            n: self.n,
            words,
            size,
        }
    }

    pub fn union(&self, other: &Family) -> Family {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Family) -> Family {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Family) -> Family {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Family {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        *words.last_mut().unwrap() &= tail_mask(self.n);
        Family {
            n: self.n,
            words,
            size: (1usize << self.n) - self.size,
        }
    }

    pub fn is_subset(&self, other: &Family) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// True if every subset of every member is a member.
    pub fn is_down_set(&self) -> bool {
        self.iter()
            .all(|m| BitIter(u64::from(m)).all(|b| self.contains(m & !(1 << b))))
    }

    /// Smallest down-set containing the family.
    pub fn down_closure(&self) -> Family {
        let mut out = self.clone();
        // masks below m are visited after m when scanning downwards
        for m in (0..(1u32 << self.n)).rev() {
            if out.contains(m) {
                for b in BitIter(u64::from(m)) {
                    out.insert(m & !(1 << b));
                }
            }
        }
        out
    }

    pub fn max_popcount(&self) -> Option<u32> {
        self.iter().map(u32::count_ones).max()
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.masks()).finish()
    }
}

/// All vertices with exactly `k` ones.
pub fn layer(n: u32, k: u32) -> Result<Family> {
    check_dim(n)?;
    if k > n {
        return Err(Error::domain(alloc::format!("layer k={k} exceeds n={n}")));
    }
    Family::from_masks(n, (0..1u32 << n).filter(|m| m.count_ones() == k))
}

fn metric_set(n: u32, x: SubsetMask, r: u32, keep: impl Fn(u32) -> bool) -> Result<Family> {
    check_dim(n)?;
    if x.n() != n {
        return Err(Error::domain(alloc::format!(
            "center has dimension {}, expected {n}",
            x.n()
        )));
    }
    if r > n {
        return Err(Error::domain(alloc::format!("radius {r} exceeds n={n}")));
    }
    Family::from_masks(
        n,
        (0..1u32 << n).filter(|&m| keep((m ^ x.bits).count_ones())),
    )
}

/// `B_r(x)`: vertices within Hamming distance `r` of `x`.
pub fn ball(n: u32, x: SubsetMask, r: u32) -> Result<Family> {
    metric_set(n, x, r, |d| d <= r)
}

/// `S_r(x)`: vertices at Hamming distance exactly `r` from `x`.
pub fn sphere(n: u32, x: SubsetMask, r: u32) -> Result<Family> {
    metric_set(n, x, r, |d| d == r)
}

/// Connected components of the subgraph of `Q_n` induced by `f`, as sorted
/// member lists. Components are ordered by their smallest member.
pub fn component_sets(f: &Family) -> Vec<Vec<u32>> {
    let n = f.n();
    let mut seen = Family::empty(n).expect("dimension already validated");
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    for start in f.iter() {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = Vec::new();
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for b in 0..n {
                let w = v ^ (1 << b);
                if f.contains(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Connected components of the subgraph of `Q_n` induced by `f`.
pub fn components(f: &Family) -> Vec<Family> {
    component_sets(f)
        .into_iter()
        .map(|c| Family::from_masks(f.n(), c).expect("members of a valid family"))
        .collect()
}

/// `m(H)`: order of the largest component, 0 for the empty family.
pub fn max_component_size(f: &Family) -> usize {
    component_sets(f).iter().map(Vec::len).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom::{binom_leq_u64, binom_u64};
    use proptest::prelude::*;

    fn m(n: u32, e: &[u32]) -> SubsetMask {
        SubsetMask::from_elements(n, e).unwrap()
    }

    #[test]
    fn layers() {
        let l = layer(3, 0).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.contains(0));
        assert_eq!(layer(4, 2).unwrap().len(), 6);
        let top = layer(3, 3).unwrap();
        assert_eq!(top.masks().collect::<Vec<_>>(), vec![m(3, &[1, 2, 3])]);
        assert!(layer(3, 4).is_err());
    }

    #[test]
    fn hamming_examples() {
        let x = m(4, &[1, 3]);
        assert_eq!(hamming(x, x).unwrap(), 0);
        assert_eq!(hamming(m(4, &[]), m(4, &[1, 2])).unwrap(), 2);
        assert_eq!(hamming(m(4, &[1]), m(4, &[2])).unwrap(), 2);
        assert!(hamming(m(4, &[1]), m(5, &[1])).is_err());
    }

    #[test]
    fn balls_and_spheres() {
        assert_eq!(ball(3, m(3, &[]), 1).unwrap().len(), 4);
        let x = m(4, &[2, 4]);
        let s0 = sphere(4, x, 0).unwrap();
        assert_eq!(s0.masks().collect::<Vec<_>>(), vec![x]);
        assert_eq!(ball(5, m(5, &[1]), 5).unwrap(), Family::full(5).unwrap());
        assert!(ball(3, m(3, &[]), 4).is_err());
        assert!(sphere(3, m(4, &[]), 1).is_err());
    }

    #[test]
    fn ball_sizes_exhaustive_small() {
        for n in 1..=10u32 {
            for r in 0..=n {
                for x in [0u32, 1, (1 << n) - 1, 0b1010 & ((1 << n) - 1)] {
                    let x = SubsetMask::new(n, x).unwrap();
                    let b = ball(n, x, r).unwrap();
                    let s = sphere(n, x, r).unwrap();
                    assert_eq!(b.len() as u64, binom_leq_u64(n, r));
                    assert_eq!(s.len() as u64, binom_u64(n, r));
                    if r >= 1 {
                        assert_eq!(b.difference(&ball(n, x, r - 1).unwrap()), s);
                    }
                }
            }
        }
    }

    #[test]
    fn component_examples() {
        let c = components(&layer(3, 1).unwrap());
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|p| p.len() == 1));
        assert_eq!(components(&Family::full(6).unwrap()).len(), 1);
        let f = Family::from_masks(2, [0b00, 0b01, 0b10]).unwrap();
        assert_eq!(components(&f).len(), 1);
        assert!(components(&Family::empty(3).unwrap()).is_empty());
        assert_eq!(max_component_size(&Family::empty(3).unwrap()), 0);
    }

    #[test]
    fn hamming_is_metric_exhaustive() {
        for n in 1..=6u32 {
            let all: Vec<_> = (0..1u32 << n)
                .map(|b| SubsetMask::new(n, b).unwrap())
                .collect();
            for &x in &all {
                for &y in &all {
                    let dxy = hamming(x, y).unwrap();
                    assert_eq!(dxy, hamming(y, x).unwrap());
                    assert_eq!(dxy == 0, x == y);
                    for &z in &all {
                        assert!(hamming(x, z).unwrap() <= dxy + hamming(y, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn mask_validation_and_display() {
        assert!(SubsetMask::new(3, 0b1000).is_err());
        assert!(SubsetMask::new(0, 0).is_err());
        assert!(SubsetMask::new(MAX_DIM + 1, 0).is_err());
        assert_eq!(alloc::format!("{:?}", m(5, &[1, 4])), "{1,4}");
    }

    #[test]
    fn family_words_and_complement() {
        let f = Family::from_masks(3, [1, 5]).unwrap();
        assert_eq!(f.words(), &[0b100010]);
        assert_eq!(f.complement().len(), 6);
        assert_eq!(Family::from_words(3, f.words().to_vec()).unwrap(), f);
        assert!(Family::from_words(3, vec![1 << 9]).is_err());
        assert_eq!(f.nth_member(1), Some(5));
        assert_eq!(f.nth_member(2), None);
    }

    #[test]
    fn down_closure_is_down_set() {
        let f = Family::from_masks(4, [0b1011, 0b0100]).unwrap();
        let d = f.down_closure();
        assert!(d.is_down_set());
        assert_eq!(d.len(), 8 + 2 - 1);
    }

    proptest! {
        #[test]
        fn components_partition(n in 1u32..=7, seed in any::<u64>()) {
            let mut state = seed | 1;
            let f = Family::from_masks(n, (0..1u32 << n).filter(|_| {
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                state & 1 == 1
            })).unwrap();
            let parts = components(&f);
            let mut union = Family::empty(n).unwrap();
            let mut total = 0;
            for p in &parts {
                total += p.len();
                union = union.union(p);
                // internally connected
                prop_assert_eq!(component_sets(p).len(), 1);
            }
            prop_assert_eq!(total, f.len());
            prop_assert_eq!(&union, &f);
            // maximal: no edge between different parts
            for (i, p) in parts.iter().enumerate() {
                for q in &parts[i + 1..] {
                    for a in p.iter() {
                        for b in 0..n {
                            prop_assert!(!q.contains(a ^ (1 << b)));
                        }
                    }
                }
            }
        }
    }
}
