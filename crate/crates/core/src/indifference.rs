//! Deciding strategy-indifference.
//!
//! Three criteria are implemented and are equivalent for every game `I`:
//!
//! * **cover sum**: `|s⁻¹(p)| = Σ_{q covers p} |s⁻¹(q)|` at every non-maximal
//!   node `p` of `P_N`;
//! * **chain partition**: `I` splits into maximal saturated chains, found by
//!   greedily peeling root-to-leaf chains off a positive maximal node;
//! * **brute force**: every maximal antichain of `P_N` wins equally often.
//!
//! The cover-sum check only visits nodes with a positive count or a child
//! with a positive count; every other node trivially satisfies the equation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{annotate, projection_counts, strike_projection, win_count_from_annotation};
use crate::multiset::PermMultiset;
use crate::perm::{check_enum_rank, Permutation};
use crate::rational::ExactRational;
use crate::tree::{PrefixTree, StrikeSet, DEFAULT_ANTICHAIN_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    CoverSum,
    ChainPartition,
    BruteForce,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::CoverSum, Method::ChainPartition, Method::BruteForce];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::CoverSum => "cover_sum",
            Method::ChainPartition => "chain_partition",
            Method::BruteForce => "brute_force",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "cover_sum" => Ok(Method::CoverSum),
            "chain_partition" => Ok(Method::ChainPartition),
            "brute_force" => Ok(Method::BruteForce),
            _ => Err(Error::NotSupported(format!("unknown method {s:?}"))),
        }
    }
}

/// Why a game is not strategy-indifferent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A non-maximal node whose count differs from the sum over its covers.
    CoverSum {
        prefix: Permutation,
        count: u64,
        cover_sum: u64,
    },
    /// The greedy peel got stuck at `prefix`: after removing the chains found
    /// so far, its residual count disagrees with its residual cover sum.
    ChainPeel {
        prefix: Permutation,
        residual_count: u64,
        residual_cover_sum: u64,
    },
    /// Two maximal antichains with different win counts.
    Antichains {
        first: StrikeSet,
        first_wins: u64,
        second: StrikeSet,
        second_wins: u64,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::CoverSum { prefix, count, cover_sum } => {
                write!(f, "p={prefix} (count {count} vs cover sum {cover_sum})")
            }
            Witness::ChainPeel { prefix, residual_count, residual_cover_sum } => write!(
                f,
                "p={prefix} (residual count {residual_count} vs residual cover sum {residual_cover_sum})"
            ),
            Witness::Antichains { first, first_wins, second, second_wins } => write!(
                f,
                "{{{}}} wins {first_wins}, {{{}}} wins {second_wins}",
                first.words(),
                second.words()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndifferenceVerdict {
    pub indifferent: bool,
    pub method: Method,
    pub win_probability: Option<ExactRational>,
    pub witness: Option<Witness>,
}

impl IndifferenceVerdict {
    fn yes(method: Method, p: ExactRational) -> Self {
        IndifferenceVerdict {
            indifferent: true,
            method,
            win_probability: Some(p),
            witness: None,
        }
    }

    fn no(method: Method, w: Witness) -> Self {
        IndifferenceVerdict {
            indifferent: false,
            method,
            win_probability: None,
            witness: Some(w),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }
}

impl fmt::Display for IndifferenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.win_probability, &self.witness) {
            (Some(p), _) => write!(
                f,
                "indifferent, win probability {}",
                p.display_with_decimal()
            ),
            (None, Some(w)) => write!(f, "not indifferent, witness {w}"),
            (None, None) => f.write_str("not indifferent"),
        }
    }
}

/// A decomposition of a game into maximal saturated chains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainPartition {
    /// Each chain lists its members from the one ending in `N` (whose
    /// projection is a maximal node) down to the one projecting to the root.
    pub chains: Vec<Vec<Permutation>>,
}

impl ChainPartition {
    /// Re-sums the chains into a multiset.
    pub fn to_multiset(&self, rank: usize) -> Result<PermMultiset> {
        let mut m = PermMultiset::new(rank);
        for c in &self.chains {
            for p in c {
                m.insert(p.clone(), 1)?;
            }
        }
        Ok(m)
    }

    /// The chain heads (members ending in `N`).
    pub fn maximal_elements(&self) -> impl Iterator<Item = &Permutation> + '_ {
        self.chains.iter().filter_map(|c| c.first())
    }
}

fn precheck(game: &PermMultiset) -> Result<()> {
    if game.is_empty() {
        return Err(Error::EmptyGame);
    }
    check_enum_rank(game.rank())
}

/// `|{π ∈ I : π_N = N}| / |I|`, the common win probability of an
/// indifferent game.
fn maximal_node_probability(game: &PermMultiset) -> ExactRational {
    let n = game.rank();
    let wins: u64 = game
        .iter()
        .filter(|(p, _)| p.entries()[n - 1] as usize == n)
        .map(|(_, m)| m)
        .sum();
    ExactRational::new(wins, game.cardinality())
}

/// Cover-sum criterion, reporting the lexicographically first offending node.
pub fn check_cover_sum(game: &PermMultiset) -> Result<IndifferenceVerdict> {
    precheck(game)?;
    let n = game.rank();
    let counts = projection_counts(game);
    let mut cover_sums: BTreeMap<Permutation, u64> = BTreeMap::new();
    for (p, &c) in &counts {
        if let Some(parent) = p.eligible_parent() {
            *cover_sums.entry(parent).or_insert(0) += c;
        }
    }
    let candidates: BTreeSet<&Permutation> = counts
        .keys()
        .filter(|p| p.rank() < n)
        .chain(cover_sums.keys())
        .collect();
    for p in candidates {
        let count = counts.get(p).copied().unwrap_or(0);
        let cover_sum = cover_sums.get(p).copied().unwrap_or(0);
        if count != cover_sum {
            return Ok(IndifferenceVerdict::no(
                Method::CoverSum,
                Witness::CoverSum {
                    prefix: p.clone(),
                    count,
                    cover_sum,
                },
            ));
        }
    }
    Ok(IndifferenceVerdict::yes(
        Method::CoverSum,
        maximal_node_probability(game),
    ))
}

/// Greedy peel. Repeatedly takes the lexicographically first maximal node
/// with a positive residual count and removes one member for every node on
/// its root path.
fn peel(game: &PermMultiset) -> std::result::Result<ChainPartition, Witness> {
    let n = game.rank();
    let mut residual: BTreeMap<Permutation, BTreeMap<Permutation, u64>> = BTreeMap::new();
    for (pi, m) in game.iter() {
        residual
            .entry(strike_projection(pi))
            .or_default()
            .insert(pi.clone(), m);
    }
    let stuck = |residual: &BTreeMap<Permutation, BTreeMap<Permutation, u64>>, p: &Permutation| {
        let count = |q: &Permutation| residual.get(q).map_or(0, |s| s.values().sum::<u64>());
        let cover_sum = residual
            .keys()
            .filter(|q| q.eligible_parent().as_ref() == Some(p))
            .map(count)
            .sum();
        Witness::ChainPeel {
            prefix: p.clone(),
            residual_count: count(p),
            residual_cover_sum: cover_sum,
        }
    };

    let mut chains = Vec::new();
    loop {
        let head = residual.keys().find(|p| p.rank() == n).cloned();
        let Some(head) = head else {
            return match residual.keys().next_back() {
                None => Ok(ChainPartition { chains }),
                // Some positive node has no positive maximal node above it.
                Some(_) => {
                    let top = residual
                        .keys()
                        .find(|p| !residual.keys().any(|q| q.rank() > p.rank() && q.extends(p)))
                        .expect("a finite poset has maximal elements")
                        .clone();
                    Err(stuck(&residual, &top))
                }
            };
        };
        let mut chain = Vec::with_capacity(n);
        let mut node = Some(head);
        while let Some(p) = node {
            let Some(sources) = residual.get_mut(&p) else {
                return Err(stuck(&residual, &p));
            };
            let (src, m) = sources.iter_mut().next().expect("entries are nonempty");
            let src = src.clone();
            *m -= 1;
            if *m == 0 {
                sources.remove(&src);
                if sources.is_empty() {
                    residual.remove(&p);
                }
            }
            chain.push(src);
            node = p.eligible_parent();
        }
        chains.push(chain);
    }
}

/// A maximal chain partition of `game`, if one exists.
pub fn maximal_chain_partition(game: &PermMultiset) -> Result<Option<ChainPartition>> {
    precheck(game)?;
    Ok(peel(game).ok())
}

fn check_chain_partition(game: &PermMultiset) -> Result<IndifferenceVerdict> {
    precheck(game)?;
    Ok(match peel(game) {
        Ok(_) => IndifferenceVerdict::yes(Method::ChainPartition, maximal_node_probability(game)),
        Err(w) => IndifferenceVerdict::no(Method::ChainPartition, w),
    })
}

/// Scores every maximal antichain of `P_N` and compares them.
pub fn check_by_antichain_enumeration(game: &PermMultiset) -> Result<IndifferenceVerdict> {
    check_by_antichain_enumeration_with_budget(game, DEFAULT_ANTICHAIN_BUDGET)
}

pub fn check_by_antichain_enumeration_with_budget(
    game: &PermMultiset,
    budget: u64,
) -> Result<IndifferenceVerdict> {
    precheck(game)?;
    let tree = PrefixTree::build(game.rank())?;
    let antichains = tree.maximal_antichains(budget)?;
    let tree = annotate(&tree, game)?;
    let mut first: Option<(StrikeSet, u64)> = None;
    for a in antichains {
        let wins = win_count_from_annotation(&tree, &a)?;
        match &first {
            None => first = Some((a, wins)),
            Some((_, w)) if *w == wins => {}
            Some((f, w)) => {
                return Ok(IndifferenceVerdict::no(
                    Method::BruteForce,
                    Witness::Antichains {
                        first: f.clone(),
                        first_wins: *w,
                        second: a,
                        second_wins: wins,
                    },
                ))
            }
        }
    }
    let (_, wins) = first.expect("the root alone is always a maximal antichain");
    Ok(IndifferenceVerdict::yes(
        Method::BruteForce,
        ExactRational::new(wins, game.cardinality()),
    ))
}

pub fn is_strategy_indifferent(game: &PermMultiset, method: Method) -> Result<IndifferenceVerdict> {
    match method {
        Method::CoverSum => check_cover_sum(game),
        Method::ChainPartition => check_chain_partition(game),
        Method::BruteForce => check_by_antichain_enumeration(game),
    }
}
