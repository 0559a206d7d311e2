//! Exact combinatorics on the hypercube `Q_n`.
//!
//! Vertices of `Q_n` are subsets of `[n]`, stored as bit masks. A [`Family`]
//! is a dense characteristic vector over all `2^n` vertices. On top of that
//! sit shattering and VC dimension ([`vc`]), induced matchings between
//! adjacent layers and the injection into maximal families ([`matching`]),
//! brute-force counting oracles ([`oracles`]) and the greedy sphere-peeling
//! separator for the integrity of `Q_n` ([`integrity`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod binom;
pub mod cube;
pub mod error;
pub mod integrity;
pub mod matching;
pub mod oracles;
pub mod vc;

pub use binom::{binom, binom_leq, ln_gamma, log_binom, log_binom_leq, ExactCount};
pub use cube::{ball, components, hamming, layer, sphere, Family, SubsetMask, MAX_DIM};
pub use error::{Error, Result};
pub use vc::{
    is_extremal, is_maximal, shattered_sets, shatters, traces, vc_dim, vc_report, VcReport,
};
