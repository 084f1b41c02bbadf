//! The partition tree {A_s : s ∈ ω^<ω}, realized by iterated diagonal pairing.
//!
//! `pair(k, m) = (k+m)(k+m+1)/2 + m`. A natural `n` lies in `A_s` exactly when
//! the first `|s|` entries of its branch equal `s`, where the branch is read off
//! by unpairing `n = pair(k0, m0)`, `m0 = pair(k1, m1)`, and so on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the number of unpairing steps when separating two naturals.
pub const SEPARATION_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodePath(pub Vec<u64>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, d: usize) -> NodePath {
        NodePath(self.0[..d.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &NodePath) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn child(&self, n: u64) -> NodePath {
        let mut v = self.0.clone();
        v.push(n);
        NodePath(v)
    }

    pub fn parent(&self) -> Option<NodePath> {
        if self.0.is_empty() {
            None
        } else {
            Some(NodePath(self.0[..self.0.len() - 1].to_vec()))
        }
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for NodePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() {
            return Ok(NodePath::root());
        }
        t.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad node entry {p:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(NodePath)
    }
}

/// Diagonal pairing. `None` on overflow.
pub fn pair(k: u64, m: u64) -> Option<u64> {
    let d = k.checked_add(m)?;
    let tri = if d % 2 == 0 {
        (d / 2).checked_mul(d.checked_add(1)?)?
    } else {
        d.checked_mul(d / 2 + 1)?
    };
    tri.checked_add(m)
}

pub fn unpair(n: u64) -> (u64, u64) {
    // largest w with w(w+1)/2 <= n
    let mut w = (((8.0 * n as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while tri(w + 1).is_some_and(|t| t <= n) {
        w += 1;
    }
    while tri(w).is_none_or(|t| t > n) {
        w -= 1;
    }
    let m = n - tri(w).unwrap();
    (w - m, m)
}

fn tri(w: u64) -> Option<u64> {
    if w.is_multiple_of(2) {
        (w / 2).checked_mul(w.checked_add(1)?)
    } else {
        w.checked_mul(w.div_ceil(2))
    }
}

pub fn branch_prefix(n: u64, d: usize) -> NodePath {
    let mut out = Vec::with_capacity(d);
    let mut cur = n;
    for _ in 0..d {
        let (k, m) = unpair(cur);
        out.push(k);
        cur = m;
    }
    NodePath(out)
}

pub fn in_node(n: u64, s: &NodePath) -> bool {
    let mut cur = n;
    for &want in &s.0 {
        let (k, m) = unpair(cur);
        if k != want {
            return false;
        }
        cur = m;
    }
    true
}

/// The `count` smallest members of `A_s`. Members are `pair(s0, pair(s1, .. pair(s_{d-1}, m)))`
/// for `m = 0, 1, ..`, which is increasing in `m`.
pub fn node_members(s: &NodePath, count: usize) -> Result<Vec<u64>> {
    (0..count as u64)
        .map(|m| {
            s.0.iter()
                .rev()
                .try_fold(m, |acc, &k| pair(k, acc))
                .ok_or_else(|| Error::Overflow(format!("members of {s} exceed u64")))
        })
        .collect()
}

/// Member number `m` of `A_s` without a size limit. Deep nodes outgrow `u64`
/// quickly: the 50th member of `A_(0,0,0,0,0)` has about 50 decimal digits.
pub fn node_member_wide(s: &NodePath, m: u64) -> BigUint {
    s.0.iter().rev().fold(BigUint::from(m), |acc, &k| pair_wide(&BigUint::from(k), &acc))
}

pub fn pair_wide(k: &BigUint, m: &BigUint) -> BigUint {
    let d = k + m;
    (&d * (&d + 1u32)) / 2u32 + m
}

pub fn unpair_wide(n: &BigUint) -> (BigUint, BigUint) {
    let mut w = ((n * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let tri = |w: &BigUint| (w * (w + 1u32)) / 2u32;
    while tri(&(&w + 1u32)) <= *n {
        w += 1u32;
    }
    while tri(&w) > *n {
        w -= 1u32;
    }
    let m = n - tri(&w);
    (&w - &m, m)
}

pub fn in_node_wide(n: &BigUint, s: &NodePath) -> bool {
    let mut cur = n.clone();
    for &want in &s.0 {
        let (k, m) = unpair_wide(&cur);
        if k != BigUint::from(want) {
            return false;
        }
        cur = m;
    }
    true
}

/// Length of the longest common prefix of the branches of `n` and `m`.
pub fn separation_level(n: u64, m: u64) -> Result<usize> {
    if n == m {
        return Err(Error::Invalid("separation_level needs distinct naturals".into()));
    }
    let (mut a, mut b) = (n, m);
    for level in 0..SEPARATION_CAP {
        let (ka, ma) = unpair(a);
        let (kb, mb) = unpair(b);
        if ka != kb {
            return Ok(level);
        }
        a = ma;
        b = mb;
    }
    Err(Error::Internal(format!(
        "no separation of {n} and {m} within {SEPARATION_CAP} levels"
    )))
}

pub fn max_separation(a: &[u64]) -> Result<Option<usize>> {
    let mut best = None;
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i + 1..] {
            let l = separation_level(x, y)?;
            best = Some(best.map_or(l, |b: usize| b.max(l)));
        }
    }
    Ok(best)
}

pub fn trace_tree(a: &[u64], depth: usize) -> BTreeSet<NodePath> {
    let mut out = BTreeSet::new();
    for &n in a {
        let b = branch_prefix(n, depth);
        for d in 0..=depth {
            out.insert(b.prefix(d));
        }
    }
    out
}

/// Number of nodes per level, levels `0..=depth`.
pub fn level_counts(tree: &BTreeSet<NodePath>, depth: usize) -> Vec<usize> {
    let mut counts = vec![0; depth + 1];
    for s in tree {
        if s.len() <= depth {
            counts[s.len()] += 1;
        }
    }
    counts
}

pub fn is_prefix_closed(tree: &BTreeSet<NodePath>) -> bool {
    tree.iter()
        .all(|s| s.parent().is_none_or(|p| tree.contains(&p)))
}

pub fn is_small_branching(tree: &BTreeSet<NodePath>) -> Result<bool> {
    if !is_prefix_closed(tree) {
        return Err(Error::Invalid("tree is not prefix-closed".into()));
    }
    let mut succ: BTreeMap<&[u64], usize> = BTreeMap::new();
    for s in tree {
        if let Some((_, init)) = s.0.split_last() {
            *succ.entry(init).or_default() += 1;
        }
    }
    Ok(succ.iter().all(|(s, &c)| c <= s.len() + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[u64]) -> NodePath {
        NodePath(v.to_vec())
    }

    // oracle: walk the diagonals in order
    fn pair_by_enumeration(limit: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut d = 0;
        while (out.len() as u64) < limit {
            for m in 0..=d {
                out.push((d - m, m));
            }
            d += 1;
        }
        out.truncate(limit as usize);
        out
    }

    #[test]
    fn unpair_matches_diagonal_walk() {
        for (n, km) in pair_by_enumeration(10_000).into_iter().enumerate() {
            assert_eq!(unpair(n as u64), km);
            assert_eq!(pair(km.0, km.1), Some(n as u64));
        }
    }

    #[test]
    fn unpair_examples() {
        assert_eq!(unpair(0), (0, 0));
        assert_eq!(unpair(1), (1, 0));
        assert_eq!(unpair(2), (0, 1));
    }

    #[test]
    fn wide_pairing_agrees_with_u64() {
        for n in (0..5000u64).chain([u64::MAX, 1 << 63]) {
            let (k, m) = unpair(n);
            assert_eq!(unpair_wide(&BigUint::from(n)), (BigUint::from(k), BigUint::from(m)));
            assert_eq!(pair_wide(&BigUint::from(k), &BigUint::from(m)), BigUint::from(n));
        }
    }

    #[test]
    fn unpair_near_u64_max() {
        for n in [u64::MAX, u64::MAX - 1, 1 << 63, (1 << 53) + 7] {
            let (k, m) = unpair(n);
            assert_eq!(pair(k, m), Some(n));
        }
    }

    #[test]
    fn branch_examples() {
        assert_eq!(branch_prefix(0, 3), p(&[0, 0, 0]));
        assert_eq!(branch_prefix(7, 2), p(&[2, 1]));
        assert_eq!(branch_prefix(9, 0), NodePath::root());
        assert_eq!(branch_prefix(20, 4), p(&[0, 0, 0, 1]));
        assert_eq!(branch_prefix(5, 3), p(&[0, 0, 1]));
    }

    #[test]
    fn membership_examples() {
        assert!(in_node(0, &p(&[0])));
        assert!(!in_node(1, &p(&[0])));
        assert!(in_node(12345, &NodePath::root()));
    }

    #[test]
    fn members_examples() {
        assert_eq!(node_members(&NodePath::root(), 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(node_members(&p(&[0]), 3).unwrap(), vec![0, 2, 5]);
        assert_eq!(node_members(&p(&[1]), 1).unwrap(), vec![1]);
        assert!(node_members(&p(&[u64::MAX]), 1).is_err());
    }

    #[test]
    fn separation_examples() {
        assert_eq!(separation_level(0, 1).unwrap(), 0);
        assert_eq!(separation_level(0, 2).unwrap(), 1);
        assert_eq!(separation_level(0, 5).unwrap(), 2);
        // branch(20) = (0,0,0,1,..), so the branches agree on three entries
        assert_eq!(separation_level(0, 20).unwrap(), 3);
        assert!(separation_level(4, 4).is_err());
    }

    #[test]
    fn trace_examples() {
        let t = trace_tree(&[0], 2);
        assert_eq!(t, [p(&[]), p(&[0]), p(&[0, 0])].into_iter().collect());
        let t = trace_tree(&[0, 1], 1);
        assert_eq!(t, [p(&[]), p(&[0]), p(&[1])].into_iter().collect());
        assert!(trace_tree(&[], 3).is_empty());
    }

    #[test]
    fn small_branching_examples() {
        let t: BTreeSet<_> = [p(&[]), p(&[0])].into_iter().collect();
        assert!(is_small_branching(&t).unwrap());
        let t: BTreeSet<_> = [p(&[]), p(&[0]), p(&[1])].into_iter().collect();
        assert!(!is_small_branching(&t).unwrap());
        // 0 and 5 share (0,0), 2 sits in (0,1): node (0) has two successors
        assert!(is_small_branching(&trace_tree(&[0, 2, 5], 2)).unwrap());
        let t: BTreeSet<_> = [p(&[0, 1])].into_iter().collect();
        assert!(is_small_branching(&t).is_err());
    }

    #[test]
    fn partition_exhaustive() {
        for n in 0..10_000u64 {
            let b = branch_prefix(n, 6);
            for d in 0..=6 {
                assert!(in_node(n, &b.prefix(d)));
                // any other node of the same length misses n
                let mut other = b.prefix(d);
                if let Some(last) = other.0.last_mut() {
                    *last += 1;
                    assert!(!in_node(n, &other));
                }
            }
        }
    }

    #[test]
    fn injectivity_below_1000() {
        for n in 0..1000u64 {
            for m in (n + 1)..1000 {
                let l = separation_level(n, m).unwrap();
                assert_eq!(branch_prefix(n, l), branch_prefix(m, l));
                assert_ne!(branch_prefix(n, l + 1), branch_prefix(m, l + 1));
            }
        }
    }

    #[test]
    fn members_are_infinite_and_in_node() {
        fn nodes(d: usize) -> Vec<NodePath> {
            if d == 0 {
                return vec![NodePath::root()];
            }
            let mut out = Vec::new();
            for s in nodes(d - 1) {
                for k in [0, 3, 9] {
                    out.push(s.child(k));
                }
            }
            out
        }
        for d in 0..=5 {
            for s in nodes(d) {
                let ms: Vec<BigUint> = (0..50).map(|m| node_member_wide(&s, m)).collect();
                assert!(ms.windows(2).all(|w| w[0] < w[1]));
                assert!(ms.iter().all(|n| in_node_wide(n, &s)));
                // the u64 route agrees wherever it does not overflow
                if let Ok(small) = node_members(&s, 50) {
                    assert!(small.iter().zip(&ms).all(|(a, b)| BigUint::from(*a) == *b));
                }
            }
        }
    }

    #[test]
    fn members_are_the_smallest() {
        for s in [p(&[0]), p(&[2]), p(&[1, 1]), p(&[0, 2, 1])] {
            let ms = node_members(&s, 4).unwrap();
            let brute: Vec<u64> = (0..=ms[3]).filter(|&n| in_node(n, &s)).collect();
            assert_eq!(brute, ms);
        }
    }

    proptest! {
        #[test]
        fn prefixes_are_consistent(n in 0u64..1_000_000, d in 0usize..8, e in 0usize..8) {
            let (lo, hi) = (d.min(e), d.max(e));
            prop_assert_eq!(branch_prefix(n, lo), branch_prefix(n, hi).prefix(lo));
        }

        #[test]
        fn refinement(n in 0u64..1_000_000, d in 0usize..8) {
            let s = branch_prefix(n, d);
            for j in 0..=d {
                prop_assert!(in_node(n, &s.prefix(j)));
            }
        }

        #[test]
        fn trace_matches_brute_force(a in proptest::collection::vec(0u64..500, 0..8), d in 0usize..5) {
            let brute: BTreeSet<NodePath> = a
                .iter()
                .flat_map(|&n| (0..=d).map(move |j| branch_prefix(n, j)))
                .collect();
            let t = trace_tree(&a, d);
            prop_assert!(is_prefix_closed(&t));
            prop_assert_eq!(t, brute);
        }
    }
}
