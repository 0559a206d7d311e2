//! Cross-module checks through the public API only.

use std::collections::HashSet;

use hcube_core::integrity::{exact_integrity, naive_baseline, peel, verify, PeelConfig};
use hcube_core::matching::{
    count_good, enumerate_induced_matchings, good_matchings, phi, reconstruct, validate_matching,
    GoodMatchingParams,
};
use hcube_core::oracles::{exact_exvc, exact_indmat, exact_m, OracleConfig};
use hcube_core::{binom_leq, is_extremal, is_maximal, vc_dim};

#[test]
fn enumerated_matchings_map_to_distinct_maximal_classes() {
    for n in 2..=4 {
        for k in 0..n {
            let mut seen = HashSet::new();
            for m in enumerate_induced_matchings(n, k).unwrap() {
                let f = phi(&m).unwrap();
                assert_eq!(f.len() as u64, binom_leq(u64::from(n), u64::from(k)).unwrap().to_u64().unwrap());
                assert_eq!(vc_dim(&f), k as i32);
                assert!(is_maximal(&f).unwrap());
                assert_eq!(reconstruct(&f, k).unwrap(), m);
                assert!(seen.insert(f));
            }
            let indmat = exact_indmat(n, k, &OracleConfig::default()).unwrap().count;
            assert_eq!(indmat, seen.len() as u64, "n={n} k={k}");
        }
    }
}

#[test]
fn good_matchings_count_and_validity() {
    let p = GoodMatchingParams::with_a_size(5, 1, 2).unwrap();
    let all: Vec<_> = good_matchings(&p).collect();
    assert_eq!(count_good(&p), all.len() as u64);
    for m in &all {
        validate_matching(m).unwrap();
        assert!(is_extremal(&phi(m).unwrap()).unwrap());
    }
}

#[test]
fn counts_are_monotone_along_the_chain() {
    let cfg = OracleConfig::default();
    for n in 2..=4 {
        for k in 1..n {
            let m = exact_m(n, k, &cfg).unwrap().count;
            let ex = exact_exvc(n, k, &cfg).unwrap().count;
            assert!(exact_indmat(n, k, &cfg).unwrap().count <= m);
            assert!(m <= ex, "n={n} k={k}");
        }
    }
}

#[test]
fn peel_upper_bounds_exact_integrity() {
    for n in 3..=4 {
        let exact = exact_integrity(n).unwrap().to_u64().unwrap();
        let cert = peel(n, &PeelConfig::default()).unwrap();
        assert!(verify(&cert).unwrap() >= exact);
        assert!(naive_baseline(n).unwrap().value >= exact);
    }
}
