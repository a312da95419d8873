//! Permutations in one-line notation, flattening, left-to-right maxima and
//! classical pattern containment.
//!
//! Positions and values are 1-based at the public surface, matching the usual
//! one-line notation `π = π_1 π_2 … π_n`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::multiset::PermMultiset;

/// Largest rank accepted by operations that enumerate all of `S_n`.
pub const MAX_ENUM_RANK: usize = 12;

/// Largest rank a [`Permutation`] can hold (entries are stored as bytes).
pub const MAX_RANK: usize = u8::MAX as usize;

/// A permutation of `{1, …, n}` with `n ≥ 1`, stored in one-line notation.
///
/// The derived ordering is lexicographic on the entries, which is also the
/// order used for canonical serialization and for tree children.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    entries: Vec<u8>,
}

impl Permutation {
    /// Validates that `entries` is a bijection of `{1, …, n}`.
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidSequence("empty permutation".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(Error::InvalidSequence(format!("value {v} outside 1..={n}")));
            }
            if seen[v] {
                return Err(Error::InvalidSequence(format!("value {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Permutation { entries })
    }

    /// Caller guarantees `entries` is a valid permutation.
    pub(crate) fn from_vec_unchecked(entries: Vec<u8>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_rank(n)?;
        Ok(Permutation::from_vec_unchecked((1..=n as u8).collect()))
    }

    pub fn decreasing(n: usize) -> Result<Self> {
        check_rank(n)?;
        Ok(Permutation::from_vec_unchecked(
            (1..=n as u8).rev().collect(),
        ))
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Entry at 1-based position `i`.
    pub fn get(&self, i: usize) -> Option<u8> {
        i.checked_sub(1).and_then(|i| self.entries.get(i).copied())
    }

    /// 1-based position of value `v`.
    pub fn position_of(&self, v: u8) -> Option<usize> {
        self.entries.iter().position(|&x| x == v).map(|i| i + 1)
    }

    /// 1-based position of the largest value `n`.
    pub fn position_of_max(&self) -> usize {
        let n = self.rank() as u8;
        self.position_of(n)
            .expect("a permutation contains its rank")
    }

    /// The `i`th prefix flattening: `flatten(π_1, …, π_i)`.
    pub fn prefix_flattening(&self, i: usize) -> Result<Permutation> {
        if i == 0 || i > self.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            });
        }
        Ok(self.prefix(i))
    }

    pub(crate) fn prefix(&self, i: usize) -> Permutation {
        if i == self.rank() {
            return self.clone();
        }
        Permutation::from_vec_unchecked(flatten_ranks(&self.entries[..i]))
    }

    /// Left-to-right maxima as `(position, value)` pairs, ascending by position.
    pub fn left_to_right_maxima(&self) -> Vec<(usize, u8)> {
        let mut best = 0u8;
        let mut out = Vec::new();
        for (i, &v) in self.entries.iter().enumerate() {
            if v > best {
                best = v;
                out.push((i + 1, v));
            }
        }
        out
    }

    pub fn lrm_count(&self) -> usize {
        let mut best = 0u8;
        self.entries
            .iter()
            .filter(|&&v| {
                let record = v > best;
                best = best.max(v);
                record
            })
            .count()
    }

    /// A prefix is eligible when it ends in a left-to-right maximum, which for
    /// a flattened prefix means its last entry is its rank.
    pub fn is_eligible(&self) -> bool {
        *self.entries.last().expect("nonempty") as usize == self.rank()
    }

    /// True when the first `p.rank()` entries of `self` are order-isomorphic to `p`.
    pub fn extends(&self, p: &Permutation) -> bool {
        p.rank() <= self.rank() && order_isomorphic(&self.entries[..p.rank()], &p.entries)
    }

    /// Classical containment: some subsequence of `self` flattens to `pattern`.
    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        occurrence_search(&self.entries, &pattern.entries, false)
    }

    /// Whether the entry immediately right of `n` exceeds every entry left of
    /// `n`. Vacuously true when `n` is last.
    pub fn is_2n1_avoiding(&self) -> bool {
        let m = self.position_of_max() - 1;
        match self.entries.get(m + 1) {
            None => true,
            Some(&right) => self.entries[..m].iter().all(|&x| x < right),
        }
    }

    /// For an eligible prefix of size at least 2, its longest proper eligible
    /// prefix flattening: the flattening at the previous left-to-right maximum.
    pub fn eligible_parent(&self) -> Option<Permutation> {
        let lrm = self.left_to_right_maxima();
        (lrm.len() >= 2).then(|| self.prefix(lrm[lrm.len() - 2].0))
    }

    /// Appends `n + 1`, giving a permutation of rank `n + 1` ending in its maximum.
    pub fn with_max_appended(&self) -> Result<Permutation> {
        check_rank(self.rank() + 1)?;
        let mut e = self.entries.clone();
        e.push(self.rank() as u8 + 1);
        Ok(Permutation::from_vec_unchecked(e))
    }

    /// Drops the last entry and re-flattens.
    pub fn without_last(&self) -> Option<Permutation> {
        (self.rank() > 1).then(|| self.prefix(self.rank() - 1))
    }

    /// Compact word such as `2314` when every value is a single digit,
    /// otherwise the space-separated line form.
    pub fn word(&self) -> String {
        if self.rank() <= 9 {
            self.entries.iter().map(|v| char::from(b'0' + v)).collect()
        } else {
            self.to_line()
        }
    }

    /// Space-separated one-line form, e.g. `3 1 4 2`.
    pub fn to_line(&self) -> String {
        self.entries.iter().join(" ")
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSequence("rank must be at least 1".into()))
    } else if n > MAX_RANK {
        Err(Error::ResourceLimit(format!("rank {n} exceeds {MAX_RANK}")))
    } else {
        Ok(())
    }
}

/// Checks the enumeration ceiling shared by every exhaustive operation.
pub fn check_enum_rank(n: usize) -> Result<()> {
    if n > MAX_ENUM_RANK {
        Err(Error::ResourceLimit(format!(
            "rank {n} exceeds the enumeration ceiling {MAX_ENUM_RANK}"
        )))
    } else {
        Ok(())
    }
}

/// Ranks of `seq` among themselves, 1-based. Entries must be distinct.
fn flatten_ranks<T: Ord>(seq: &[T]) -> Vec<u8> {
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by(|&a, &b| seq[a].cmp(&seq[b]));
    let mut out = vec![0u8; seq.len()];
    for (r, &i) in order.iter().enumerate() {
        out[i] = r as u8 + 1;
    }
    out
}

fn order_isomorphic(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| (0..i).all(|j| (a[j] < a[i]) == (b[j] < b[i])))
}

/// The unique permutation with the same relative order as `seq`.
pub fn flatten<T: Ord>(seq: &[T]) -> Result<Permutation> {
    if seq.is_empty() {
        return Err(Error::InvalidSequence("empty sequence".into()));
    }
    if seq.len() > MAX_RANK {
        return Err(Error::ResourceLimit(format!(
            "sequence of length {} exceeds {MAX_RANK}",
            seq.len()
        )));
    }
    let ranks = flatten_ranks(seq);
    let mut sorted: Vec<&T> = seq.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSequence("duplicate entries".into()));
    }
    Ok(Permutation::from_vec_unchecked(ranks))
}

/// Backtracking subsequence search. With `last_fixed`, only occurrences whose
/// final letter sits at the last position of `text` are considered.
fn occurrence_search(text: &[u8], pattern: &[u8], last_fixed: bool) -> bool {
    let (n, k) = (text.len(), pattern.len());
    if k > n {
        return false;
    }
    let mut chosen: Vec<u8> = Vec::with_capacity(k);

    fn go(
        text: &[u8],
        pattern: &[u8],
        start: usize,
        chosen: &mut Vec<u8>,
        last_fixed: bool,
    ) -> bool {
        let j = chosen.len();
        let k = pattern.len();
        if j == k {
            return true;
        }
        let n = text.len();
        let range = if last_fixed && j == k - 1 {
            n - 1..n
        } else {
            start..n - k + j + 1
        };
        for pos in range {
            if pos < start {
                break;
            }
            let v = text[pos];
            let fits = chosen
                .iter()
                .zip(pattern)
                .all(|(&c, &p)| (c < v) == (p < pattern[j]));
            if fits {
                chosen.push(v);
                if go(text, pattern, pos + 1, chosen, last_fixed) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    go(text, pattern, 0, &mut chosen, last_fixed)
}

/// Iterates `S_n` in lexicographic order.
pub fn symmetric_group(n: usize) -> Result<impl Iterator<Item = Permutation>> {
    check_rank(n)?;
    check_enum_rank(n)?;
    Ok((1..=n as u8)
        .permutations(n)
        .map(Permutation::from_vec_unchecked))
}

/// All permutations of rank `n` avoiding `pattern`, each with multiplicity 1.
///
/// Built rank by rank: a permutation avoids the pattern only if its
/// `(n−1)`-prefix flattening does, so each avoider of rank `k−1` is extended
/// by every possible last value and only occurrences using that last entry
/// need to be searched.
pub fn avoiders(n: usize, pattern: &Permutation) -> Result<PermMultiset> {
    check_rank(n)?;
    check_enum_rank(n)?;
    let mut level: Vec<Vec<u8>> = vec![vec![1]];
    if pattern.rank() == 1 {
        level.clear();
    }
    for k in 2..=n {
        let mut next = Vec::new();
        for rho in &level {
            for v in 1..=k as u8 {
                let mut e: Vec<u8> = rho
                    .iter()
                    .map(|&x| if x >= v { x + 1 } else { x })
                    .collect();
                e.push(v);
                if !occurrence_search(&e, &pattern.entries, true) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    let mut out = PermMultiset::new(n);
    for e in level {
        out.insert(Permutation::from_vec_unchecked(e), 1)?;
    }
    Ok(out)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.word())
    }
}

/// Accepts either the space-separated line form (`3 1 4 2`) or, for ranks up
/// to 9, the compact word form (`3142`).
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values: Vec<u64> = if s.contains(char::is_whitespace) {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::InvalidSequence(format!("not an integer: {t:?}")))
                })
                .collect::<Result<_>>()?
        } else if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            s.bytes().map(|b| (b - b'0') as u64).collect()
        } else {
            return Err(Error::InvalidSequence(format!("cannot parse {s:?}")));
        };
        if values.len() > MAX_RANK || values.iter().any(|&v| v > MAX_RANK as u64) {
            return Err(Error::InvalidSequence(format!("{s:?} is too large")));
        }
        Permutation::new(values.into_iter().map(|v| v as u8).collect())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.word())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
