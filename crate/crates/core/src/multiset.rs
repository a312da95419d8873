//! Multisets of equal-rank permutations and their line-oriented text format.
//!
//! Text form: one permutation per line as space-separated values, an optional
//! `* k` suffix for multiplicity `k ≥ 1`, `#` comment lines and blank lines
//! ignored. Serialization is canonical: lexicographic order, `* k` only when
//! `k > 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermMultiset {
    rank: usize,
    elements: BTreeMap<Permutation, u64>,
}

impl PermMultiset {
    pub fn new(rank: usize) -> Self {
        PermMultiset {
            rank,
            elements: BTreeMap::new(),
        }
    }

    /// Builds a multiset of the given rank, one copy per item.
    pub fn from_perms<I>(rank: usize, perms: I) -> Result<Self>
    where
        I: IntoIterator<Item = Permutation>,
    {
        let mut m = PermMultiset::new(rank);
        for p in perms {
            m.insert(p, 1)?;
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds `count` copies of `p`. Adding zero copies is a no-op.
    pub fn insert(&mut self, p: Permutation, count: u64) -> Result<()> {
        if p.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: p.rank(),
            });
        }
        if count > 0 {
            *self.elements.entry(p).or_insert(0) += count;
        }
        Ok(())
    }

    /// Removes up to `count` copies; returns how many were removed.
    pub fn remove(&mut self, p: &Permutation, count: u64) -> u64 {
        let Some(m) = self.elements.get_mut(p) else {
            return 0;
        };
        let taken = count.min(*m);
        *m -= taken;
        if *m == 0 {
            self.elements.remove(p);
        }
        taken
    }

    pub fn multiplicity(&self, p: &Permutation) -> u64 {
        self.elements.get(p).copied().unwrap_or(0)
    }

    /// Sum of multiplicities.
    pub fn cardinality(&self) -> u64 {
        self.elements.values().sum()
    }

    /// Number of distinct permutations.
    pub fn distinct(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.elements.values().all(|&m| m == 1)
    }

    /// Distinct elements with multiplicities, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, u64)> + '_ {
        self.elements.iter().map(|(p, &m)| (p, m))
    }

    /// Multiset union (multiplicities add).
    pub fn merge(&mut self, other: &PermMultiset) -> Result<()> {
        for (p, m) in other.iter() {
            self.insert(p.clone(), m)?;
        }
        Ok(())
    }

    /// Multiplicity-weighted sum of left-to-right-maxima counts.
    pub fn total_lrm(&self) -> BigUint {
        self.iter()
            .map(|(p, m)| BigUint::from(p.lrm_count() as u64) * m)
            .sum()
    }

    /// Parses the line format. The rank is taken from the first data line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out: Option<PermMultiset> = None;
        for (p, m, line) in data_lines(text) {
            let (p, m) = (p?, m?);
            let set = out.get_or_insert_with(|| PermMultiset::new(p.rank()));
            if p.rank() != set.rank {
                return Err(Error::Parse {
                    line,
                    message: format!("rank {} differs from rank {}", p.rank(), set.rank),
                });
            }
            set.insert(p, m)?;
        }
        out.ok_or(Error::Parse {
            line: 0,
            message: "no permutations found".into(),
        })
    }

    /// Canonical text form, one line per distinct permutation.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, m) in self.iter() {
            s.push_str(&p.to_line());
            if m > 1 {
                let _ = write!(s, " * {m}");
            }
            s.push('\n');
        }
        s
    }
}

/// Splits the line format into `(permutation, multiplicity, line number)`
/// triples. Shared with strike-set files.
pub(crate) fn data_lines(
    text: &str,
) -> impl Iterator<Item = (Result<Permutation>, Result<u64>, usize)> + '_ {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(line, l)| {
            let err = |message: String| Error::Parse { line, message };
            let (body, mult) = match l.split_once('*') {
                Some((body, k)) => {
                    let k = k.trim();
                    let m = match k.parse::<u64>() {
                        Ok(m) if m >= 1 => Ok(m),
                        _ => Err(err(format!("bad multiplicity {k:?}"))),
                    };
                    (body, m)
                }
                None => (l, Ok(1)),
            };
            let perm = body
                .trim()
                .parse::<Permutation>()
                .map_err(|e| err(e.to_string()));
            (perm, mult, line)
        })
}
