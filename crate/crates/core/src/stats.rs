//! Left-to-right-maxima statistics of the size-3 pattern classes, the
//! classical counting sequences behind them, and the recursive bijection
//! from 231-avoiders to 213-avoiders.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grow::expected_lrm;
use crate::multiset::PermMultiset;
use crate::perm::{avoiders, symmetric_group, Permutation};
use crate::rational::ExactRational;

/// Enumeration ceiling for the symmetric group.
pub const MAX_SYM_RANK: usize = 8;
/// Enumeration ceiling for the Catalan classes.
pub const MAX_CLASS_RANK: usize = 10;
/// Ceiling for [`verify_lemma_comb`], whose brute-force side walks `S_N`.
pub const MAX_LEMMA_RANK: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Sym,
    Av123,
    Av132,
    Av213,
    Av231,
    Av312,
    Av321,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 7] = [
        ClassLabel::Sym,
        ClassLabel::Av123,
        ClassLabel::Av132,
        ClassLabel::Av213,
        ClassLabel::Av231,
        ClassLabel::Av312,
        ClassLabel::Av321,
    ];

    /// One representative per family, in table order.
    pub const FAMILIES: [ClassLabel; 4] = [
        ClassLabel::Sym,
        ClassLabel::Av123,
        ClassLabel::Av231,
        ClassLabel::Av321,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Sym => "sym",
            ClassLabel::Av123 => "av123",
            ClassLabel::Av132 => "av132",
            ClassLabel::Av213 => "av213",
            ClassLabel::Av231 => "av231",
            ClassLabel::Av312 => "av312",
            ClassLabel::Av321 => "av321",
        }
    }

    pub fn pattern(self) -> Option<Permutation> {
        let w = match self {
            ClassLabel::Sym => return None,
            ClassLabel::Av123 => "123",
            ClassLabel::Av132 => "132",
            ClassLabel::Av213 => "213",
            ClassLabel::Av231 => "231",
            ClassLabel::Av312 => "312",
            ClassLabel::Av321 => "321",
        };
        Some(w.parse().expect("valid pattern"))
    }

    /// Family representative: av132/av213 map to av231, av312 to av321.
    pub fn family(self) -> ClassLabel {
        match self {
            ClassLabel::Av132 | ClassLabel::Av213 | ClassLabel::Av231 => ClassLabel::Av231,
            ClassLabel::Av312 | ClassLabel::Av321 => ClassLabel::Av321,
            other => other,
        }
    }

    /// Limit of the win probability `1/(E_LRM + 1)` as the rank grows.
    pub fn asymptote(self) -> ExactRational {
        match self.family() {
            ClassLabel::Av123 => ExactRational::new(4, 11),
            ClassLabel::Av231 => ExactRational::new(1, 4),
            _ => ExactRational::zero(),
        }
    }

    /// The class members of rank `n`.
    pub fn members(self, n: usize) -> Result<PermMultiset> {
        let limit = if self == ClassLabel::Sym {
            MAX_SYM_RANK
        } else {
            MAX_CLASS_RANK
        };
        if n == 0 || n > limit {
            return Err(Error::ResourceLimit(format!(
                "{self} enumeration supports ranks 1..={limit}, got {n}"
            )));
        }
        match self.pattern() {
            None => PermMultiset::from_perms(n, symmetric_group(n)?),
            Some(pat) => avoiders(n, &pat),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassLabel::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::NotSupported(format!("unknown class {s:?}")))
    }
}

/// Catalan numbers via `C_{n+1} = Σ C_i C_{n−i}`.
pub fn catalan(n: usize) -> BigUint {
    catalan_table(n).swap_remove(n)
}

fn catalan_table(n: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for m in 1..=n {
        let next = (0..m).map(|i| &c[i] * &c[m - 1 - i]).sum();
        c.push(next);
    }
    c
}

/// Unsigned Stirling numbers of the first kind `[n k]`, the number of
/// permutations of `S_n` with `k` left-to-right maxima. Zero outside `1 ≤ k ≤ n`,
/// except `[0 0] = 1`.
pub fn stirling_first(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    stirling_row(n).swap_remove(k)
}

/// `[n 0], …, [n n]` by `c(n,k) = c(n−1,k−1) + (n−1) c(n−1,k)`.
pub fn stirling_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m + 1];
        for k in 1..=m {
            let stay = if k < m {
                &row[k] * (m - 1)
            } else {
                BigUint::zero()
            };
            next[k] = &row[k - 1] + stay;
        }
        row = next;
    }
    row
}

/// Narayana numbers `T(n,k) = (1/k) C(n−1,k−1) C(n,k−1)`; zero outside `1 ≤ k ≤ n`.
pub fn narayana(n: usize, k: usize) -> BigUint {
    if k == 0 || k > n {
        return BigUint::zero();
    }
    let a = binomial(BigUint::from(n - 1), BigUint::from(k - 1));
    let b = binomial(BigUint::from(n), BigUint::from(k - 1));
    a * b / k
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// `H_n = Σ_{i=1}^n 1/i`.
pub fn harmonic(n: usize) -> ExactRational {
    (1..=n).map(|i| ExactRational::new(1, i as u64)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LrmDistribution {
    pub class_label: ClassLabel,
    pub rank: usize,
    /// `counts[k−1]` members have exactly `k` left-to-right maxima, `k = 1..=n`.
    #[serde(serialize_with = "crate::serde_big::biguint_vec")]
    pub counts: Vec<BigUint>,
}

impl LrmDistribution {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Count with exactly `k` left-to-right maxima (1-based `k`).
    pub fn get(&self, k: usize) -> BigUint {
        k.checked_sub(1)
            .and_then(|i| self.counts.get(i).cloned())
            .unwrap_or_default()
    }

    pub fn mean(&self) -> ExactRational {
        let weighted: BigUint = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, c)| c * (i + 1))
            .sum();
        ExactRational::from_biguint_ratio(&weighted, &self.total())
    }
}

/// Histogram of left-to-right-maxima counts over the class, by enumeration.
pub fn lrm_distribution(class: ClassLabel, n: usize) -> Result<LrmDistribution> {
    let members = class.members(n)?;
    let mut counts = vec![0u64; n];
    for (p, m) in members.iter() {
        counts[p.lrm_count() - 1] += m;
    }
    Ok(LrmDistribution {
        class_label: class,
        rank: n,
        counts: counts.into_iter().map(BigUint::from).collect(),
    })
}

/// Closed form for the expected number of left-to-right maxima at rank `n`.
pub fn expected_lrm_closed_form(class: ClassLabel, n: usize) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::NotSupported("closed forms start at rank 1".into()));
    }
    let c = catalan_table(n + 1);
    let ratio = |a: usize, b: usize| ExactRational::from_biguint_ratio(&c[a], &c[b]);
    Ok(match class.family() {
        ClassLabel::Sym => harmonic(n),
        ClassLabel::Av123 => ExactRational::from_integer(2) - ratio(n - 1, n),
        ClassLabel::Av231 => ratio(n + 1, n) - ExactRational::one(),
        ClassLabel::Av321 => ExactRational::new(n as u64 + 1, 2),
        other => unreachable!("{other} is not a family representative"),
    })
}

/// A printed formula from the results table, evaluated under both readings
/// of its variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedForm {
    pub form: &'static str,
    /// Value with `N` set to the rank of the bine, when defined there.
    pub at_bine_rank: Option<ExactRational>,
    /// Value with `N` set to the rank of the grown game (bine rank + 1).
    pub at_game_rank: ExactRational,
    /// Which reading reproduces the enumerated mean: `bine_rank`,
    /// `game_rank`, `both` or `neither`.
    pub matches: &'static str,
}

fn printed_forms(class: ClassLabel, n: usize, enumerated: &ExactRational) -> Vec<PrintedForm> {
    type Eval = fn(usize) -> Option<ExactRational>;
    let forms: Vec<(&'static str, Eval)> = match class.family() {
        ClassLabel::Sym => vec![("sum_{i=1}^{N-1} 1/i", |big_n| Some(harmonic(big_n - 1)))],
        ClassLabel::Av123 => vec![
            ("2 - C_{N-2}/C_{N-1}", |big_n| {
                (big_n >= 2).then(|| {
                    ExactRational::from_integer(2)
                        - ExactRational::from_biguint_ratio(
                            &catalan(big_n - 2),
                            &catalan(big_n - 1),
                        )
                })
            }),
            ("(7N-5)/(4N-2)", |big_n| {
                Some(ExactRational::new(
                    7 * big_n as i64 - 5,
                    4 * big_n as i64 - 2,
                ))
            }),
        ],
        ClassLabel::Av231 => vec![
            ("C_N/C_{N-1} - 1", |big_n| {
                (big_n >= 1).then(|| {
                    ExactRational::from_biguint_ratio(&catalan(big_n), &catalan(big_n - 1))
                        - ExactRational::one()
                })
            }),
            ("3N/(N+2)", |big_n| {
                Some(ExactRational::new(3 * big_n as u64, big_n as u64 + 2))
            }),
        ],
        _ => vec![
            ("(2N-3) C_{N-2}/C_{N-1}", |big_n| {
                (big_n >= 2).then(|| {
                    ExactRational::from_integer(2 * big_n as i64 - 3)
                        * ExactRational::from_biguint_ratio(
                            &catalan(big_n - 2),
                            &catalan(big_n - 1),
                        )
                })
            }),
            ("N/2", |big_n| Some(ExactRational::new(big_n as u64, 2))),
        ],
    };
    forms
        .into_iter()
        .filter_map(|(form, eval)| {
            let a = eval(n);
            let b = eval(n + 1)?;
            let matches = match (a.as_ref() == Some(enumerated), &b == enumerated) {
                (true, true) => "both",
                (true, false) => "bine_rank",
                (false, true) => "game_rank",
                (false, false) => "neither",
            };
            Some(PrintedForm {
                form,
                at_bine_rank: a,
                at_game_rank: b,
                matches,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultsRow {
    pub class_label: ClassLabel,
    /// Rank of the bine; the grown game has rank `n + 1`.
    pub n: usize,
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub cardinality: BigUint,
    pub distribution: LrmDistribution,
    pub expected_lrm: ExactRational,
    pub win_probability: ExactRational,
    pub asymptote: ExactRational,
    pub printed_forms: Vec<PrintedForm>,
}

/// One results row for `class` used as a bine of rank `n`.
pub fn results_row(class: ClassLabel, n: usize) -> Result<ResultsRow> {
    let members = class.members(n)?;
    let distribution = lrm_distribution(class, n)?;
    let expected = expected_lrm(&members)?;
    Ok(ResultsRow {
        class_label: class,
        n,
        cardinality: BigUint::from(members.cardinality()),
        printed_forms: printed_forms(class, n, &expected),
        win_probability: (expected.clone() + ExactRational::one()).recip(),
        expected_lrm: expected,
        distribution,
        asymptote: class.asymptote(),
    })
}

/// One row per family: sym, av123, av231, av321.
pub fn results_table(n: usize) -> Result<Vec<ResultsRow>> {
    if n > MAX_SYM_RANK {
        return Err(Error::ResourceLimit(format!(
            "results table supports n ≤ {MAX_SYM_RANK}, got {n}"
        )));
    }
    ClassLabel::FAMILIES
        .into_iter()
        .map(|c| results_row(c, n))
        .collect()
}

/// Recursive block swap from 231-avoiders to 213-avoiders.
///
/// With first entry `k`, a 231-avoider is `k B A` where `B` holds the values
/// below `k` and `A` those above. The image is `k f(A) f(B)`, with each block
/// mapped recursively in place on its own values.
pub fn bijection_231_to_213(pi: &Permutation) -> Result<Permutation> {
    let pat: Permutation = "231".parse().expect("valid pattern");
    if pi.contains_pattern(&pat) {
        return Err(Error::NotInDomain(format!("{pi} contains 231")));
    }
    let mut out = Vec::with_capacity(pi.rank());
    swap_blocks(pi.entries(), &mut out);
    Ok(Permutation::from_vec_unchecked(out))
}

fn swap_blocks(block: &[u8], out: &mut Vec<u8>) {
    let Some((&k, rest)) = block.split_first() else {
        return;
    };
    let split = rest.iter().position(|&v| v > k).unwrap_or(rest.len());
    let (lower, upper) = rest.split_at(split);
    out.push(k);
    swap_blocks(upper, out);
    swap_blocks(lower, out);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCombCheck {
    pub n: usize,
    /// `Σ_{i=0}^{N−1} (1+i) [N−1 i]`.
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub stirling_side: BigUint,
    /// `(N−1)! (1 + H_{N−1})`.
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub harmonic_side: BigUint,
    /// Number of (2−N1)-avoiding permutations of `S_N`.
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub brute_force: BigUint,
    pub holds: bool,
}

/// Checks the Stirling/harmonic identity against a brute-force count of
/// (2−N1)-avoiders. The `i = 0` term only contributes at `N = 1`.
pub fn verify_lemma_comb(n: usize) -> Result<LemmaCombCheck> {
    if n == 0 || n > MAX_LEMMA_RANK {
        return Err(Error::ResourceLimit(format!(
            "lemma check supports N in 1..={MAX_LEMMA_RANK}, got {n}"
        )));
    }
    let row = stirling_row(n - 1);
    let stirling_side: BigUint = row.iter().enumerate().map(|(i, c)| c * (i + 1)).sum();
    let h = (harmonic(n - 1) + ExactRational::one())
        * ExactRational::from_biguint_ratio(&factorial(n - 1), &BigUint::one());
    let harmonic_side = h
        .numer()
        .to_biguint()
        .filter(|_| h.is_integer())
        .expect("(N−1)!(1 + H_{N−1}) is a nonnegative integer");
    let brute_force = BigUint::from(symmetric_group(n)?.filter(|p| p.is_2n1_avoiding()).count());
    Ok(LemmaCombCheck {
        n,
        holds: stirling_side == harmonic_side && harmonic_side == brute_force,
        stirling_side,
        harmonic_side,
        brute_force,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eq321Check {
    pub n: usize,
    /// `Σ_{k=1}^N C(N−1,k−1) C(N,k−1)`.
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub lhs: BigUint,
    /// `C(2N−1, N)`.
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub rhs: BigUint,
    /// `(2N−1) C_{N−1}`.
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub catalan_form: BigUint,
    pub holds: bool,
}

pub fn verify_eq_321(n: usize) -> Result<Eq321Check> {
    if n == 0 {
        return Err(Error::NotSupported("the identity starts at N = 1".into()));
    }
    let b = |a: usize, k: usize| binomial(BigUint::from(a), BigUint::from(k));
    let lhs: BigUint = (1..=n).map(|k| b(n - 1, k - 1) * b(n, k - 1)).sum();
    let rhs = b(2 * n - 1, n);
    let catalan_form = catalan(n - 1) * (2 * n - 1);
    Ok(Eq321Check {
        n,
        holds: lhs == rhs && rhs == catalan_form,
        lhs,
        rhs,
        catalan_form,
    })
}

/// `|I|` for the game grown from `S_{N−1}`, `N = 1..=len`, via the Stirling side
/// of the lemma (OEIS A000774).
pub fn full_bine_game_sizes(len: usize) -> Vec<BigUint> {
    (1..=len)
        .map(|n| {
            stirling_row(n - 1)
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i + 1))
                .sum()
        })
        .collect()
}
