//! Exact combinatorial search used by the gradings: minimum partition into
//! fitting parts, minimum set cover, clique number and chromatic number.
//! Everything here is exhaustive with deterministic tie-breaking.

/// Minimum number of parts in a partition of `0..n` where every part fits.
///
/// `can_add(part, x)` says whether `part ∪ {x}` fits, given that `part` fits.
/// The fitting family must be closed under subsets, which makes covering and
/// partitioning the same problem. Returns the part count and a witness labelling.
pub fn min_partition<F>(n: usize, can_add: F) -> (usize, Vec<usize>)
where
    F: Fn(&[usize], usize) -> bool,
{
    if n == 0 {
        return (0, Vec::new());
    }
    let mut k = 1;
    loop {
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut label = vec![0; n];
        if assign(0, n, k, &mut parts, &mut label, &can_add) {
            return (k, label);
        }
        k += 1;
    }
}

fn assign<F>(
    i: usize,
    n: usize,
    k: usize,
    parts: &mut Vec<Vec<usize>>,
    label: &mut [usize],
    can_add: &F,
) -> bool
where
    F: Fn(&[usize], usize) -> bool,
{
    if i == n {
        return true;
    }
    for p in 0..parts.len() {
        if can_add(&parts[p], i) {
            parts[p].push(i);
            label[i] = p;
            if assign(i + 1, n, k, parts, label, can_add) {
                return true;
            }
            parts[p].pop();
        }
    }
    if parts.len() < k {
        parts.push(vec![i]);
        label[i] = parts.len() - 1;
        if assign(i + 1, n, k, parts, label, can_add) {
            return true;
        }
        parts.pop();
    }
    false
}

/// Bitmask dynamic program over all subsets; the reference oracle for
/// [`min_partition`]. `fits(mask)` must be closed under subsets. `n <= 20`.
pub fn min_partition_bitmask<F>(n: usize, fits: F) -> usize
where
    F: Fn(u32) -> bool,
{
    assert!(n <= 20);
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let size = 1usize << n;
    let ok: Vec<bool> = (0..size as u32).map(&fits).collect();
    let mut best = vec![usize::MAX; size];
    best[0] = 0;
    for mask in 1..size as u32 {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // submasks of rest, each joined with the lowest bit
        let mut sub = rest;
        loop {
            let part = sub | low;
            if ok[part as usize] {
                let prev = best[(mask ^ part) as usize];
                if prev != usize::MAX && prev + 1 < best[mask as usize] {
                    best[mask as usize] = prev + 1;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full as usize]
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn first_zero(&self, n: usize) -> Option<usize> {
        (0..n).find(|&i| !self.get(i))
    }
}

/// Drop duplicate and dominated candidate sets.
pub fn maximal_sets(mut cands: Vec<Bits>) -> Vec<Bits> {
    cands.sort_by(|a, b| b.count().cmp(&a.count()).then(a.cmp(b)));
    cands.dedup();
    let mut kept: Vec<Bits> = Vec::new();
    for c in cands {
        if !kept.iter().any(|k| c.is_subset(k)) {
            kept.push(c);
        }
    }
    kept
}

/// Least number of candidate sets whose union is `0..n`, searching no deeper
/// than `limit`. `None` when no cover of size `<= limit` exists.
pub fn min_set_cover(n: usize, cands: &[Bits], limit: usize) -> Option<usize> {
    if n == 0 {
        return Some(0);
    }
    let cands = maximal_sets(cands.to_vec());
    let mut union = Bits::new(n);
    for c in &cands {
        union.or_assign(c);
    }
    if union.first_zero(n).is_some() {
        return None;
    }
    (1..=limit).find(|&k| cover_dfs(n, &cands, &Bits::new(n), k))
}

fn cover_dfs(n: usize, cands: &[Bits], covered: &Bits, left: usize) -> bool {
    let Some(target) = covered.first_zero(n) else {
        return true;
    };
    if left == 0 {
        return false;
    }
    for c in cands.iter().filter(|c| c.get(target)) {
        let mut next = covered.clone();
        next.or_assign(c);
        if cover_dfs(n, cands, &next, left - 1) {
            return true;
        }
    }
    false
}

/// Clique number of a graph on `n <= 64` vertices given by adjacency masks.
pub fn clique_number(adj: &[u64]) -> usize {
    let n = adj.len();
    assert!(n <= 64);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    bron_kerbosch(adj, 0, all, 0, &mut best);
    best
}

fn bron_kerbosch(adj: &[u64], size: usize, mut p: u64, mut x: u64, best: &mut usize) {
    if p == 0 {
        if x == 0 && size > *best {
            *best = size;
        }
        return;
    }
    if size + p.count_ones() as usize <= *best {
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        bron_kerbosch(adj, size + 1, p & adj[v], x & adj[v], best);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Chromatic number of a graph on `n <= 64` vertices given by adjacency masks.
pub fn chromatic_number(adj: &[u64]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].count_ones()), v));
    let mut k = 1;
    loop {
        let mut color = vec![usize::MAX; n];
        if color_dfs(adj, &order, 0, k, 0, &mut color) {
            return k;
        }
        k += 1;
    }
}

fn color_dfs(
    adj: &[u64],
    order: &[usize],
    i: usize,
    k: usize,
    used: usize,
    color: &mut [usize],
) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    // a fresh color is only tried once (symmetry)
    for c in 0..k.min(used + 1) {
        let clash = (0..adj.len()).any(|u| adj[v] >> u & 1 == 1 && color[u] == c);
        if !clash {
            color[v] = c;
            if color_dfs(adj, order, i + 1, k, used.max(c + 1), color) {
                return true;
            }
            color[v] = usize::MAX;
        }
    }
    false
}

/// Reference chromatic number: try every assignment of `k` colors.
pub fn chromatic_number_brute(adj: &[u64]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    for k in 1..=n {
        let total = (k as u64).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let cols: Vec<u64> = (0..n)
                .map(|_| {
                    let r = c % k as u64;
                    c /= k as u64;
                    r
                })
                .collect();
            let proper = (0..n).all(|u| (0..n).all(|v| adj[u] >> v & 1 == 0 || cols[u] != cols[v]));
            if proper {
                return k;
            }
        }
    }
    n
}

/// Reference clique number by scanning all vertex subsets.
pub fn clique_number_brute(adj: &[u64]) -> usize {
    let n = adj.len();
    assert!(n <= 20);
    let mut best = 0;
    for mask in 0u64..(1 << n) {
        let ok = (0..n).all(|v| mask >> v & 1 == 0 || (mask & !(1 << v)) & !adj[v] == 0);
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<u64> {
        let mut adj = vec![0u64; n];
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
            }
        }
        adj
    }

    #[test]
    fn chromatic_and_clique_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.random_range(0..7);
            let adj = random_graph(&mut rng, n, 0.5);
            assert_eq!(chromatic_number(&adj), chromatic_number_brute(&adj));
            assert_eq!(clique_number(&adj), clique_number_brute(&adj));
        }
    }

    #[test]
    fn known_graphs() {
        let k4 = vec![0b1110, 0b1101, 0b1011, 0b0111];
        assert_eq!(clique_number(&k4), 4);
        assert_eq!(chromatic_number(&k4), 4);
        let c5: Vec<u64> = (0..5).map(|i| (1 << ((i + 1) % 5)) | (1 << ((i + 4) % 5))).collect();
        assert_eq!(chromatic_number(&c5), 3);
        assert_eq!(clique_number(&c5), 2);
    }

    proptest! {
        #[test]
        fn partition_agrees_with_bitmask_dp(seed in 0u64..10_000, n in 0usize..10) {
            // random downward-closed family: sets avoiding a random list of forbidden pairs
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bad = vec![0u32; n];
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.4) {
                        bad[u] |= 1 << v;
                        bad[v] |= 1 << u;
                    }
                }
            }
            let fast = min_partition(n, |part, x| part.iter().all(|&y| bad[x] >> y & 1 == 0)).0;
            let slow = min_partition_bitmask(n, |m| (0..n).all(|v| m >> v & 1 == 0 || m & bad[v] == 0));
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn set_cover_is_minimal(seed in 0u64..10_000, n in 1usize..8, m in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut cands = Vec::new();
            for _ in 0..m {
                let mut b = Bits::new(n);
                for i in 0..n {
                    if rng.random_bool(0.4) {
                        b.set(i);
                    }
                }
                cands.push(b);
            }
            let fast = min_set_cover(n, &cands, m);
            let mut slow = None;
            for mask in 0u32..(1 << m) {
                let mut u = Bits::new(n);
                for (j, c) in cands.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        u.or_assign(c);
                    }
                }
                if u.count() == n {
                    let k = mask.count_ones() as usize;
                    slow = Some(slow.map_or(k, |s: usize| s.min(k)));
                }
            }
            prop_assert_eq!(fast, slow);
        }
    }
}
