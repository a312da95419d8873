//! Strategy-indifferent games of best choice.
//!
//! A game is a multiset `I` of permutations of rank `N` (interview rank
//! orderings). A strategy is a strike set: an antichain of eligible prefixes
//! in the prefix tree `P_N`. The game is strategy-indifferent when every
//! maximal antichain wins with the same probability.
//!
//! All probabilities are exact rationals.

pub mod error;
pub mod game;
pub mod grow;
pub mod indifference;
pub mod multiset;
pub mod perm;
pub mod rational;
mod serde_big;
pub mod stats;
pub mod tree;

pub use error::{Error, Result};
pub use game::{annotate, play, strike_projection, win_probability, GameOutcome};
pub use grow::{
    bine_of_competitors, expected_lrm, game_size, grow_game, indifferent_win_probability, phi,
    phi_alt, phi_inverse, GrowthMap,
};
pub use indifference::{
    check_by_antichain_enumeration, check_cover_sum, is_strategy_indifferent,
    maximal_chain_partition, ChainPartition, IndifferenceVerdict, Method, Witness,
};
pub use multiset::PermMultiset;
pub use perm::{avoiders, flatten, symmetric_group, Permutation};
pub use rational::ExactRational;
pub use stats::{ClassLabel, LrmDistribution, ResultsRow};
pub use tree::{PrefixTree, StrikeSet};
