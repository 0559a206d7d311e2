use alloc::vec::Vec;

use crate::binom::ExactCount;
use crate::cube::{check_dim, layer, max_component_size, Family};
use crate::error::{Error, Result};

/// `exact_integrity` enumerates all `2^(2^n)` vertex subsets in the worst case.
pub const EXACT_INTEGRITY_MAX_N: u32 = 4;

/// Largest component of the vertex set `alive` (bit `v` = vertex `v`).
fn largest_component(alive: u64, nbr: &[u64]) -> u32 {
    let mut left = alive;
    let mut best = 0;
    while left != 0 {
        let mut comp = left & left.wrapping_neg();
        loop {
            let mut grown = comp;
            let mut bits = comp;
            while bits != 0 {
                grown |= nbr[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            grown &= alive;
            if grown == comp {
                break;
            }
            comp = grown;
        }
        best = best.max(comp.count_ones());
        left &= !comp;
    }
    best
}

/// `I(Q_n) = min_S |S| + m(Q_n \ S)` by exhaustion over separators in
/// order of size, stopping once `|S|` alone reaches the best value so far.
pub fn exact_integrity(n: u32) -> Result<ExactCount> {
    check_dim(n)?;
    if n > EXACT_INTEGRITY_MAX_N {
        return Err(Error::resource(
            "exact-integrity-max-n",
            n,
            EXACT_INTEGRITY_MAX_N,
        ));
    }
    let order = 1u32 << n;
    let all = if order == 64 {
        !0u64
    } else {
        (1u64 << order) - 1
    };
    let nbr: Vec<u64> = (0..order)
        .map(|v| (0..n).fold(0u64, |acc, b| acc | 1 << (v ^ (1 << b))))
        .collect();
    let mut best = u64::from(order);
    for size in 0..order {
        if u64::from(size) >= best {
            break;
        }
        // Gosper's hack over all `size`-subsets
        let mut s: u64 = (1u64 << size) - 1;
        while s <= all {
            let value = u64::from(size) + u64::from(largest_component(all & !s, &nbr));
            best = best.min(value);
            if s == 0 {
                break;
            }
            let c = s & s.wrapping_neg();
            let r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    Ok(best.into())
}

/// Integrity value of cutting out the middle layer `C(n, floor(n/2))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NaiveBaseline {
    pub separator_size: usize,
    pub max_component: usize,
    pub value: u64,
}

/// Removes layer `floor(n/2)` and measures what is left.
pub fn naive_baseline(n: u32) -> Result<NaiveBaseline> {
    check_dim(n)?;
    if n < 2 {
        return Err(Error::domain("baseline needs n >= 2"));
    }
    let middle = layer(n, n / 2)?;
    let rest: Family = middle.complement();
    let max_component = max_component_size(&rest);
    Ok(NaiveBaseline {
        separator_size: middle.len(),
        max_component,
        value: (middle.len() + max_component) as u64,
    })
}
