//! The prefix tree `P_N` of eligible prefixes, strike sets, and maximal
//! antichain enumeration.
//!
//! Every eligible prefix of size `i` is a permutation of `S_i` ending in `i`,
//! so `P_N` has `(i−1)!` nodes of size `i`. The parent of a node is its prefix
//! flattening at the previous left-to-right maximum, which makes the
//! containment order a rooted tree with root `1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiset::data_lines;
use crate::perm::{check_enum_rank, symmetric_group, Permutation};

/// Default cap on the number of antichains a single enumeration may emit.
pub const DEFAULT_ANTICHAIN_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug)]
pub struct PrefixTree {
    rank: usize,
    /// Sorted by size, then lexicographically; children always follow parents.
    nodes: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    annotation: Option<Vec<u64>>,
}

impl PrefixTree {
    /// Builds `P_N` for `1 ≤ N ≤ 12`.
    pub fn build(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ResourceLimit(
                "prefix tree rank must be at least 1".into(),
            ));
        }
        check_enum_rank(rank)?;
        let mut nodes = vec![Permutation::identity(1)?];
        for size in 2..=rank {
            for p in symmetric_group(size - 1)? {
                nodes.push(p.with_max_appended()?);
            }
        }
        let index: HashMap<Permutation, usize> = nodes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let mut parent = vec![None; nodes.len()];
        let mut children = vec![Vec::new(); nodes.len()];
        for (i, q) in nodes.iter().enumerate().skip(1) {
            let pi = index[&q.eligible_parent().expect("non-root nodes have a parent")];
            parent[i] = Some(pi);
            children[pi].push(i);
        }
        for c in &mut children {
            c.sort_by(|&a, &b| nodes[a].cmp(&nodes[b]));
        }
        Ok(PrefixTree {
            rank,
            nodes,
            index,
            parent,
            children,
            annotation: None,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &Permutation {
        &self.nodes[0]
    }

    /// All nodes, ordered by size and then lexicographically.
    pub fn nodes(&self) -> &[Permutation] {
        &self.nodes
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    fn idx(&self, p: &Permutation) -> Result<usize> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::NotInTree(p.word()))
    }

    pub fn parent(&self, p: &Permutation) -> Result<Option<&Permutation>> {
        Ok(self.parent[self.idx(p)?].map(|i| &self.nodes[i]))
    }

    /// The nodes covering `p`, lexicographically ordered; empty iff `p` is maximal.
    pub fn covers(&self, p: &Permutation) -> Result<Vec<&Permutation>> {
        Ok(self.children[self.idx(p)?]
            .iter()
            .map(|&c| &self.nodes[c])
            .collect())
    }

    pub fn is_maximal(&self, p: &Permutation) -> Result<bool> {
        Ok(self.children[self.idx(p)?].is_empty())
    }

    /// The `(N−1)!` maximal nodes, i.e. permutations of `S_N` ending in `N`.
    pub fn maximal_nodes(&self) -> impl Iterator<Item = &Permutation> + '_ {
        self.nodes.iter().filter(move |p| p.rank() == self.rank)
    }

    /// Preimage count for `p`, when the tree carries an annotation.
    pub fn annotation(&self, p: &Permutation) -> Result<Option<u64>> {
        let i = self.idx(p)?;
        Ok(self.annotation.as_ref().map(|a| a[i]))
    }

    pub fn is_annotated(&self) -> bool {
        self.annotation.is_some()
    }

    pub(crate) fn with_annotation(mut self, counts: Vec<u64>) -> Self {
        debug_assert_eq!(counts.len(), self.nodes.len());
        self.annotation = Some(counts);
        self
    }

    pub(crate) fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Whether `a` is a maximal antichain of this tree: a subset of the nodes
    /// meeting every root-to-leaf path exactly once.
    pub fn is_maximal_antichain(&self, a: &StrikeSet) -> bool {
        let mut members = Vec::with_capacity(a.len());
        for p in a.iter() {
            match self.index.get(p) {
                Some(&i) => members.push(i),
                None => return false,
            }
        }
        let mut in_a = vec![false; self.nodes.len()];
        for &i in &members {
            in_a[i] = true;
        }
        // Walk down from the root, stopping at members. Every leaf must be
        // blocked, and every member must be reached (none lies below another).
        let mut reached = 0usize;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            if in_a[i] {
                reached += 1;
            } else if self.children[i].is_empty() {
                return false;
            } else {
                stack.extend(&self.children[i]);
            }
        }
        reached == members.len()
    }

    /// Replaces non-maximal `p ∈ a` by the set of nodes covering it.
    pub fn refine(&self, a: &StrikeSet, p: &Permutation) -> Result<StrikeSet> {
        if !a.contains(p) {
            return Err(Error::InvalidStrikeSet(format!(
                "{p} is not in the strike set"
            )));
        }
        let covers = self.covers(p)?;
        if covers.is_empty() {
            return Err(Error::NotApplicable(format!("{p} is maximal")));
        }
        let mut set = a.prefixes.clone();
        set.remove(p);
        set.extend(covers.into_iter().cloned());
        StrikeSet::new(set)
    }

    fn subtree_counts_u128(&self) -> Vec<u128> {
        let mut counts = vec![1u128; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            if !self.children[i].is_empty() {
                let prod = self.children[i]
                    .iter()
                    .fold(1u128, |acc, &c| acc.saturating_mul(counts[c]));
                counts[i] = prod.saturating_add(1);
            }
        }
        counts
    }

    /// Number of maximal antichains, by the product recursion
    /// `a(r) = 1 + Π a(child)`, without materializing any of them.
    pub fn count_maximal_antichains(&self) -> BigUint {
        let mut counts: Vec<BigUint> = vec![BigUint::one(); self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            if !self.children[i].is_empty() {
                let prod: BigUint = self.children[i].iter().map(|&c| &counts[c]).product();
                counts[i] = prod + 1u32;
            }
        }
        counts.swap_remove(0)
    }

    /// Streams every maximal antichain exactly once.
    ///
    /// Order: for a subtree rooted at `r`, `{r}` comes first, followed by the
    /// unions of one antichain per child subtree in odometer order, with the
    /// lexicographically first child as the most significant digit.
    pub fn maximal_antichains(&self, budget: u64) -> Result<MaximalAntichains<'_>> {
        let counts = self.subtree_counts_u128();
        let total = counts[0];
        if total > budget as u128 {
            return Err(Error::ResourceLimit(format!(
                "P_{} has {} maximal antichains, over the budget of {budget}",
                self.rank,
                self.count_maximal_antichains()
            )));
        }
        Ok(MaximalAntichains {
            tree: self,
            counts,
            next: 0,
            total,
        })
    }

    fn unrank(&self, counts: &[u128], node: usize, mut k: u128, out: &mut Vec<usize>) {
        if k == 0 {
            out.push(node);
            return;
        }
        k -= 1;
        let ch = &self.children[node];
        let mut digits = vec![0u128; ch.len()];
        for (d, &c) in digits.iter_mut().zip(ch).rev() {
            *d = k % counts[c];
            k /= counts[c];
        }
        for (&c, &d) in ch.iter().zip(&digits) {
            self.unrank(counts, c, d, out);
        }
    }

    /// DOT rendering; annotated trees get a second label line `(k)`.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph P{} {{\n  rankdir=BT;\n", self.rank);
        for (i, p) in self.nodes.iter().enumerate() {
            match &self.annotation {
                Some(a) => {
                    let _ = writeln!(s, "  \"{p}\" [label=\"{p}\\n({})\"];", a[i]);
                }
                None => {
                    let _ = writeln!(s, "  \"{p}\" [label=\"{p}\"];");
                }
            }
        }
        for (i, par) in self.parent.iter().enumerate() {
            if let Some(par) = par {
                let _ = writeln!(s, "  \"{}\" -> \"{}\";", self.nodes[*par], self.nodes[i]);
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            rank: self.rank,
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(i, p)| NodeJson {
                    prefix: p.word(),
                    parent: self.parent[i].map(|j| self.nodes[j].word()),
                    count: self.annotation.as_ref().map(|a| a[i]),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeJson {
    pub rank: usize,
    pub nodes: Vec<NodeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeJson {
    pub prefix: String,
    pub parent: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

pub struct MaximalAntichains<'a> {
    tree: &'a PrefixTree,
    counts: Vec<u128>,
    next: u128,
    total: u128,
}

impl Iterator for MaximalAntichains<'_> {
    type Item = StrikeSet;

    fn next(&mut self) -> Option<StrikeSet> {
        if self.next >= self.total {
            return None;
        }
        let mut out = Vec::new();
        self.tree.unrank(&self.counts, 0, self.next, &mut out);
        self.next += 1;
        Some(StrikeSet {
            prefixes: out
                .into_iter()
                .map(|i| self.tree.nodes[i].clone())
                .collect(),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for MaximalAntichains<'_> {}

/// An antichain of eligible prefixes, possibly of mixed ranks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct StrikeSet {
    prefixes: BTreeSet<Permutation>,
}

impl StrikeSet {
    /// Rejects non-eligible prefixes and comparable pairs.
    pub fn new<I: IntoIterator<Item = Permutation>>(prefixes: I) -> Result<Self> {
        let prefixes: BTreeSet<Permutation> = prefixes.into_iter().collect();
        if let Some(p) = prefixes.iter().find(|p| !p.is_eligible()) {
            return Err(Error::InvalidStrikeSet(format!("{p} is not eligible")));
        }
        let v: Vec<&Permutation> = prefixes.iter().collect();
        for (i, a) in v.iter().enumerate() {
            for b in &v[i + 1..] {
                if a.extends(b) || b.extends(a) {
                    return Err(Error::InvalidStrikeSet(format!(
                        "{a} and {b} are comparable"
                    )));
                }
            }
        }
        Ok(StrikeSet { prefixes })
    }

    /// The antichain of all maximal nodes of `P_N`.
    pub fn maximal_nodes(rank: usize) -> Result<Self> {
        check_enum_rank(rank)?;
        let mut prefixes = BTreeSet::new();
        for p in symmetric_group(rank - 1)? {
            prefixes.insert(p.with_max_appended()?);
        }
        Ok(StrikeSet { prefixes })
    }

    pub fn root() -> Self {
        StrikeSet {
            prefixes: BTreeSet::from([Permutation::identity(1).expect("rank 1")]),
        }
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.prefixes.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> + '_ {
        self.prefixes.iter()
    }

    /// Maximality in `P_N` without building the tree: a size-`i` prefix with
    /// `i < N` lies below `(N−1)!/i!` maximal nodes (one when `i = N`), and an
    /// antichain covers all `(N−1)!` of them exactly when these shares add up.
    pub fn is_maximal_for_rank(&self, rank: usize) -> bool {
        if rank == 0 || rank > 33 || self.prefixes.iter().any(|p| p.rank() > rank) {
            return false;
        }
        let fact = |k: usize| (1..=k as u128).product::<u128>();
        let total = fact(rank - 1);
        let covered: u128 = self
            .prefixes
            .iter()
            .map(|p| {
                if p.rank() == rank {
                    1
                } else {
                    total / fact(p.rank())
                }
            })
            .sum();
        covered == total
    }

    /// Parses the line format used by multiset files; `* k` is not allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut set = Vec::new();
        for (p, m, line) in data_lines(text) {
            let p = p?;
            if m? != 1 {
                return Err(Error::Parse {
                    line,
                    message: "strike sets do not take multiplicities".into(),
                });
            }
            set.push(p);
        }
        StrikeSet::new(set)
    }

    pub fn to_text(&self) -> String {
        self.prefixes.iter().map(|p| p.to_line() + "\n").collect()
    }

    /// Words joined by single spaces, e.g. `12 213`.
    pub fn words(&self) -> String {
        self.prefixes
            .iter()
            .map(|p| p.word())
            .collect::<Vec<_>>()
            .join(" ")
    }
}
