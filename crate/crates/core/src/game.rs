//! Playing strike-set strategies and scoring them exactly.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiset::PermMultiset;
use crate::perm::Permutation;
use crate::rational::ExactRational;
use crate::tree::{PrefixTree, StrikeSet};

/// The prefix flattening of `π` that ends at the value `n`: the only prefix
/// at which `π` can be won.
pub fn strike_projection(pi: &Permutation) -> Permutation {
    pi.prefix(pi.position_of_max())
}

/// Sparse preimage counts `|s⁻¹(p)|`, keyed by prefix. Nodes with no
/// preimage are absent.
pub fn projection_counts(game: &PermMultiset) -> BTreeMap<Permutation, u64> {
    let mut counts = BTreeMap::new();
    for (pi, m) in game.iter() {
        *counts.entry(strike_projection(pi)).or_insert(0) += m;
    }
    counts
}

/// A copy of `tree` annotated with `|s⁻¹(p)|` for every node, zeros included.
pub fn annotate(tree: &PrefixTree, game: &PermMultiset) -> Result<PrefixTree> {
    if game.rank() != tree.rank() {
        return Err(Error::RankMismatch {
            expected: tree.rank(),
            found: game.rank(),
        });
    }
    let mut counts = vec![0u64; tree.len()];
    for (p, m) in projection_counts(game) {
        let i = tree
            .index_of(&p)
            .expect("strike projections are nodes of P_N");
        counts[i] += m;
    }
    Ok(tree.clone().with_annotation(counts))
}

/// Number of wins for the maximal antichain `a`. Errors as in [`win_probability`].
pub fn win_count(game: &PermMultiset, a: &StrikeSet) -> Result<u64> {
    if game.is_empty() {
        return Err(Error::EmptyGame);
    }
    if !a.is_maximal_for_rank(game.rank()) {
        return Err(Error::InvalidStrikeSet(format!(
            "{{{}}} is not a maximal antichain of P_{}",
            a.words(),
            game.rank()
        )));
    }
    Ok(game
        .iter()
        .filter(|(pi, _)| a.contains(&strike_projection(pi)))
        .map(|(_, m)| m)
        .sum())
}

/// `(1/|I|) Σ_{p∈A} |s⁻¹(p)|` for a maximal antichain `A` of `P_N`.
pub fn win_probability(game: &PermMultiset, a: &StrikeSet) -> Result<ExactRational> {
    let wins = win_count(game, a)?;
    Ok(ExactRational::new(wins, game.cardinality()))
}

/// Win count read off an annotated tree: `Σ_{p∈A} annotation[p]`.
pub fn win_count_from_annotation(tree: &PrefixTree, a: &StrikeSet) -> Result<u64> {
    let mut wins = 0;
    for p in a.iter() {
        wins += tree
            .annotation(p)?
            .ok_or_else(|| Error::NotApplicable("tree is not annotated".into()))?;
    }
    Ok(wins)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameOutcome {
    pub stop_position: Option<usize>,
    pub selected_value: Option<u8>,
    pub won: bool,
}

/// Interviews until a prefix flattening lies in `a`; never stopping is a loss.
pub fn play(pi: &Permutation, a: &StrikeSet) -> GameOutcome {
    let max_len = a
        .iter()
        .map(Permutation::rank)
        .max()
        .unwrap_or(0)
        .min(pi.rank());
    for i in 1..=max_len {
        if a.contains(&pi.prefix(i)) {
            let v = pi.entries()[i - 1];
            return GameOutcome {
                stop_position: Some(i),
                selected_value: Some(v),
                won: v as usize == pi.rank(),
            };
        }
    }
    GameOutcome {
        stop_position: None,
        selected_value: None,
        won: false,
    }
}
