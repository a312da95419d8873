//! Independent reference implementations. Nothing here calls into the
//! library's algorithms; permutations are plain `Vec<u8>` words.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

pub type Word = Vec<u8>;

/// All permutations of `1..=n` in lexicographic order.
pub fn perms(n: usize) -> Vec<Word> {
    fn go(n: u8, cur: &mut Word, used: &mut Vec<bool>, out: &mut Vec<Word>) {
        if cur.len() == n as usize {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v as usize] {
                used[v as usize] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n as u8, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

/// Rank-reduce: each entry becomes 1 + the number of smaller entries.
pub fn flat(seq: &[u8]) -> Word {
    seq.iter()
        .map(|&x| 1 + seq.iter().filter(|&&y| y < x).count() as u8)
        .collect()
}

/// 1-based positions of left-to-right maxima.
pub fn lrm_positions(w: &[u8]) -> Vec<usize> {
    let mut best = 0;
    let mut out = Vec::new();
    for (i, &x) in w.iter().enumerate() {
        if x > best {
            best = x;
            out.push(i + 1);
        }
    }
    out
}

pub fn lrm_values(w: &[u8]) -> Vec<u8> {
    lrm_positions(w).into_iter().map(|p| w[p - 1]).collect()
}

pub fn cycles(w: &[u8]) -> usize {
    let n = w.len();
    let mut seen = vec![false; n];
    let mut c = 0;
    for s in 0..n {
        if !seen[s] {
            c += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = w[i] as usize - 1;
            }
        }
    }
    c
}

/// Naive pattern containment over all index subsets.
pub fn contains(w: &[u8], pat: &[u8]) -> bool {
    fn go(w: &[u8], pat: &[u8], start: usize, picked: &mut Word) -> bool {
        if picked.len() == pat.len() {
            return flat(picked) == pat;
        }
        for i in start..w.len() {
            picked.push(w[i]);
            if go(w, pat, i + 1, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
    go(w, pat, 0, &mut Vec::new())
}

pub fn avoiders(n: usize, pat: &[u8]) -> Vec<Word> {
    perms(n).into_iter().filter(|w| !contains(w, pat)).collect()
}

/// Every eligible prefix of a rank-`n` permutation: flattened prefixes that
/// end at a left-to-right maximum.
pub fn eligible_prefixes(n: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for w in perms(n) {
        for p in lrm_positions(&w) {
            out.insert(flat(&w[..p]));
        }
    }
    out
}

/// Root-to-leaf paths of the prefix tree: the eligible prefixes of each
/// permutation that ends in its maximum.
pub fn leaf_paths(n: usize) -> Vec<Vec<Word>> {
    perms(n)
        .into_iter()
        .filter(|w| *w.last().unwrap() as usize == n)
        .map(|w| {
            lrm_positions(&w)
                .into_iter()
                .map(|p| flat(&w[..p]))
                .collect()
        })
        .collect()
}

/// Immediate successors in the prefix order: eligible prefixes `q` whose
/// flattening at their previous maximum is `p`.
pub fn children(p: &[u8], n: usize) -> Vec<Word> {
    let mut out: Vec<Word> = eligible_prefixes(n)
        .into_iter()
        .filter(|q| {
            let pos = lrm_positions(q);
            pos.len() >= 2 && flat(&q[..pos[pos.len() - 2]]) == p
        })
        .collect();
    out.sort();
    out
}

pub fn is_maximal_antichain(a: &BTreeSet<Word>, n: usize) -> bool {
    leaf_paths(n)
        .iter()
        .all(|path| path.iter().filter(|p| a.contains(*p)).count() == 1)
}

/// Maximal antichains by closure under "replace a node by its children",
/// starting from the root.
pub fn maximal_antichains(n: usize) -> Vec<BTreeSet<Word>> {
    let kids: std::collections::HashMap<Word, Vec<Word>> = eligible_prefixes(n)
        .into_iter()
        .map(|p| {
            let c = children(&p, n);
            (p, c)
        })
        .collect();
    let start: BTreeSet<Word> = [vec![1u8]].into_iter().collect();
    let mut seen: HashSet<BTreeSet<Word>> = HashSet::new();
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        if !seen.insert(a.clone()) {
            continue;
        }
        for p in &a {
            let c = &kids[p];
            if !c.is_empty() {
                let mut b = a.clone();
                b.remove(p);
                b.extend(c.iter().cloned());
                stack.push(b);
            }
        }
    }
    let mut v: Vec<_> = seen.into_iter().collect();
    v.sort();
    v
}

/// Plays one ordering: stop at the first left-to-right maximum whose
/// flattened prefix is struck; win iff that value is the overall maximum.
pub fn wins(w: &[u8], a: &BTreeSet<Word>) -> bool {
    for p in lrm_positions(w) {
        if a.contains(&flat(&w[..p])) {
            return w[p - 1] as usize == w.len();
        }
    }
    false
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn catalan(n: u128) -> u128 {
    binomial(2 * n, n) / (n + 1)
}

pub fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// Parsed words like "3142".
pub fn w(s: &str) -> Word {
    s.bytes().map(|b| b - b'0').collect()
}

/// A tiny exact fraction over u128 for oracle arithmetic.
/// Kept reduced, so structural equality is value equality; the derived
/// order is only for storing fractions in sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac(pub u128, pub u128);

impl Frac {
    pub fn new(n: u128, d: u128) -> Frac {
        let g = gcd(n, d);
        Frac(n / g, d / g)
    }
    pub fn plus(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    pub fn minus(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 - o.0 * self.1, self.1 * o.1)
    }
    pub fn recip(self) -> Frac {
        Frac::new(self.1, self.0)
    }
    pub fn show(self) -> String {
        if self.1 == 1 {
            self.0.to_string()
        } else {
            format!("{}/{}", self.0, self.1)
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn harmonic(n: u128) -> Frac {
    (1..=n).fold(Frac(0, 1), |acc, k| acc.plus(Frac(1, k)))
}
