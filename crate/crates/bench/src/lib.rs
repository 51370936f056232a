//! Inputs shared by the benchmarks.

use ringlat::fixtures;
use ringlat::poset::SupportPoset;
use ringlat::{Extension, Limits};

/// Ring fixtures of increasing size, for enumeration and splitter timings.
pub const EXTENSIONS: &[&str] = &["f2-in-f16", "diagonal-f2^4", "f2^3-in-f4^3", "z9-in-dual", "f2xf3-in-f4xf9"];

pub fn extension(name: &str) -> Extension {
    fixtures::extension(name, Limits::default()).expect("bench fixtures build")
}

/// Seeded random trees with `n` nodes.
pub fn trees(n: usize, count: u64) -> Vec<SupportPoset> {
    (0..count).map(|seed| SupportPoset::random_tree(n, seed)).collect()
}
