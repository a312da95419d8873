//! Shared fixtures for the criterion benches.

use bestchoice::{avoiders, symmetric_group, PermMultiset, Permutation};

/// All of `S_n` as a multiplicity-free multiset.
pub fn uniform(n: usize) -> PermMultiset {
    PermMultiset::from_perms(n, symmetric_group(n).expect("small rank")).expect("same rank")
}

/// `Av_n(pattern)`.
pub fn class(n: usize, pattern: &str) -> PermMultiset {
    let pat: Permutation = pattern.parse().expect("valid pattern");
    avoiders(n, &pat).expect("small rank")
}
