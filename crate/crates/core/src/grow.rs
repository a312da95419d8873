//! Growing strategy-indifferent games from a bine of competitors.
//!
//! A bine `J'` of rank `N−1` becomes a game of rank `N` by appending `N` to
//! every member and then, for each left-to-right maximum of the result,
//! adding one permutation that puts `N` at that position. Which permutation
//! realizes each position is fixed by a [`GrowthMap`], applied repeatedly
//! from the member ending in `N` until `N` comes first.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::multiset::PermMultiset;
use crate::perm::{check_enum_rank, Permutation};
use crate::rational::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GrowthMap {
    /// Move `N` to the next-to-last left-to-right maximum, keeping every
    /// other value in the same relative order.
    #[default]
    Phi,
    /// Swap `N` with the entry at the next-to-last left-to-right maximum,
    /// leaving every other entry in place.
    PhiAlt,
}

impl GrowthMap {
    pub fn apply(self, pi: &Permutation) -> Result<Permutation> {
        match self {
            GrowthMap::Phi => phi(pi),
            GrowthMap::PhiAlt => phi_alt(pi),
        }
    }
}

impl fmt::Display for GrowthMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthMap::Phi => "phi",
            GrowthMap::PhiAlt => "phi-alt",
        })
    }
}

impl FromStr for GrowthMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi" => Ok(GrowthMap::Phi),
            "phi-alt" | "phi_alt" => Ok(GrowthMap::PhiAlt),
            _ => Err(Error::NotSupported(format!("unknown growth map {s:?}"))),
        }
    }
}

/// 0-based index of the next-to-last left-to-right maximum.
fn next_to_last_lrm(pi: &Permutation) -> Result<usize> {
    let lrm = pi.left_to_right_maxima();
    if lrm.len() < 2 {
        return Err(Error::NotApplicable(format!(
            "{pi} has a single left-to-right maximum"
        )));
    }
    Ok(lrm[lrm.len() - 2].0 - 1)
}

fn without_max(pi: &Permutation) -> (Vec<u8>, usize) {
    let n = pi.rank() as u8;
    let at = pi.position_of_max() - 1;
    let rest = pi.entries().iter().copied().filter(|&v| v != n).collect();
    (rest, at)
}

fn insert_max(rest: &[u8], at: usize) -> Permutation {
    let mut e = rest.to_vec();
    e.insert(at, rest.len() as u8 + 1);
    Permutation::from_vec_unchecked(e)
}

pub fn phi(pi: &Permutation) -> Result<Permutation> {
    let m = next_to_last_lrm(pi)?;
    let (rest, _) = without_max(pi);
    Ok(insert_max(&rest, m))
}

/// Inverse of [`phi`] on its image.
///
/// With `N` removed, `N` sat at some left-to-right maximum `m` of what
/// remains; the preimage puts `N` back at the next left-to-right maximum to
/// the right of `m`, or at the end when there is none. The candidate is
/// accepted only when `phi` maps it back to `pi`.
pub fn phi_inverse(pi: &Permutation) -> Result<Permutation> {
    let not_image = || Error::NotApplicable(format!("{pi} is not in the image of phi"));
    if pi.rank() < 2 {
        return Err(not_image());
    }
    let (rest, m) = without_max(pi);
    let n1 = rest.len();
    if m == n1 {
        return Err(not_image());
    }
    let prefix_max = rest[..m].iter().copied().max().unwrap_or(0);
    let mut running = prefix_max.max(rest[m]);
    let next = (m + 1..n1)
        .find(|&j| {
            let record = rest[j] > running;
            running = running.max(rest[j]);
            record
        })
        .unwrap_or(n1);
    let candidate = insert_max(&rest, next);
    match phi(&candidate) {
        Ok(back) if &back == pi => Ok(candidate),
        _ => Err(not_image()),
    }
}

pub fn phi_alt(pi: &Permutation) -> Result<Permutation> {
    let m = next_to_last_lrm(pi)?;
    let at = pi.position_of_max() - 1;
    let mut e = pi.entries().to_vec();
    e.swap(m, at);
    Ok(Permutation::from_vec_unchecked(e))
}

/// The chain grown from a member ending in `N`: `π, map(π), map(map(π)), …`
/// until `N` is first.
pub fn grow_chain(pi: &Permutation, map: GrowthMap) -> Result<Vec<Permutation>> {
    let mut chain = vec![pi.clone()];
    let mut cur = pi.clone();
    while cur.lrm_count() > 1 {
        cur = map.apply(&cur)?;
        chain.push(cur.clone());
    }
    Ok(chain)
}

/// Grows the rank-`N` game whose bine of competitors is `bine` (rank `N−1`).
pub fn grow_game(bine: &PermMultiset, map: GrowthMap) -> Result<PermMultiset> {
    if bine.is_empty() {
        return Err(Error::EmptyGame);
    }
    let n = bine.rank() + 1;
    check_enum_rank(n)?;
    let mut game = PermMultiset::new(n);
    for (member, m) in bine.iter() {
        for q in grow_chain(&member.with_max_appended()?, map)? {
            game.insert(q, m)?;
        }
    }
    Ok(game)
}

/// Members ending in `N`, with the last entry dropped.
pub fn bine_of_competitors(game: &PermMultiset) -> Result<PermMultiset> {
    let n = game.rank();
    if n < 2 {
        return Err(Error::NotApplicable("a bine needs rank at least 2".into()));
    }
    let mut bine = PermMultiset::new(n - 1);
    for (pi, m) in game.iter() {
        if pi.entries()[n - 1] as usize == n {
            bine.insert(pi.without_last().expect("rank ≥ 2"), m)?;
        }
    }
    Ok(bine)
}

/// Multiplicity-weighted mean number of left-to-right maxima.
pub fn expected_lrm(m: &PermMultiset) -> Result<ExactRational> {
    if m.is_empty() {
        return Err(Error::EmptyGame);
    }
    Ok(ExactRational::from_biguint_ratio(
        &m.total_lrm(),
        &BigUint::from(m.cardinality()),
    ))
}

/// `1 / (E_LRM(J') + 1)`, the win probability of the game grown from `bine`.
pub fn indifferent_win_probability(bine: &PermMultiset) -> Result<ExactRational> {
    Ok((expected_lrm(bine)? + ExactRational::one()).recip())
}

/// `|J'| (E_LRM(J') + 1)`, the cardinality of the grown game.
pub fn game_size(bine: &PermMultiset) -> Result<BigUint> {
    if bine.is_empty() {
        return Err(Error::EmptyGame);
    }
    Ok(bine.total_lrm() + bine.cardinality())
}
