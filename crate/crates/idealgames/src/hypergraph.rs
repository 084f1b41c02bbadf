//! The staged random hypergraph with the star property, universal embeddings
//! of finite colorings, the `R^n_{k,l}` cover grading, the coloring behind
//! `ED~_m`, and homogeneous-set search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{cap_check, Error, Result};
use crate::exact;
use crate::tree;

pub const RNKL_CAP: usize = 14;
pub const STAGE_CAP: usize = 3;
pub const DEFAULT_FAMILY_BUDGET: u128 = 1 << 20;

/// Anything that colors `n`-subsets with colors `0..k`.
pub trait Colors {
    fn arity(&self) -> usize;
    fn colors(&self) -> usize;
    /// Color of a sorted `n`-subset.
    fn color(&self, tuple: &[u64]) -> Result<u8>;
}

/// All `r`-subsets of `v` in lexicographic order; `v` sorted.
pub fn subsets(v: &[u64], r: usize) -> Vec<Vec<u64>> {
    fn go(v: &[u64], r: usize, start: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..v.len() {
            if v.len() - i < r - cur.len() {
                break;
            }
            cur.push(v[i]);
            go(v, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= v.len() {
        go(v, r, 0, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

fn sorted_tuple(mut t: Vec<u64>) -> Result<Vec<u64>> {
    t.sort_unstable();
    if t.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Invalid(format!("tuple {t:?} has repeated vertices")));
    }
    Ok(t)
}

/// A total coloring of the `n`-subsets of `[0, V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub n: usize,
    pub k: usize,
    pub vertices: u64,
    map: BTreeMap<Vec<u64>, u8>,
}

impl Coloring {
    pub fn from_fn(n: usize, k: usize, vertices: u64, mut f: impl FnMut(&[u64]) -> u8) -> Result<Self> {
        if n < 2 || !(2..=255).contains(&k) {
            return Err(Error::Invalid(format!("coloring needs n >= 2 and 2 <= k <= 255, got n={n} k={k}")));
        }
        let verts: Vec<u64> = (0..vertices).collect();
        let mut map = BTreeMap::new();
        for t in subsets(&verts, n) {
            let c = f(&t);
            if c as usize >= k {
                return Err(Error::OutOfRange(format!("color {c} for {t:?} with k = {k}")));
            }
            map.insert(t, c);
        }
        Ok(Coloring { n, k, vertices, map })
    }

    pub fn random(n: usize, k: usize, vertices: u64, rng: &mut impl Rng) -> Result<Self> {
        Coloring::from_fn(n, k, vertices, |_| rng.random_range(0..k as u8))
    }

    /// The restriction of another coloring to `[0, V)`.
    pub fn restrict(c: &impl Colors, vertices: u64) -> Result<Self> {
        let mut err = None;
        let out = Coloring::from_fn(c.arity(), c.colors(), vertices, |t| {
            c.color(t).unwrap_or_else(|e| {
                err = Some(e);
                0
            })
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u64>, u8)> {
        self.map.iter().map(|(t, &c)| (t, c))
    }

    /// Header `n k V`, then one line `v1 .. vn c` per `n`-subset.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.k, self.vertices);
        for (t, c) in &self.map {
            for v in t {
                s.push_str(&format!("{v} "));
            }
            s.push_str(&format!("{c}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let nums = |l: &str| -> Result<Vec<u64>> {
            l.split_whitespace().map(|x| x.parse().map_err(|_| Error::Parse(format!("bad number {x:?}")))).collect()
        };
        let head = nums(lines.next().ok_or_else(|| Error::Parse("empty coloring file".into()))?)?;
        let [n, k, v] = head[..] else {
            return Err(Error::Parse("header must be `n k V`".into()));
        };
        let (n, k) = (n as usize, k as usize);
        let mut given = BTreeMap::new();
        for l in lines {
            let row = nums(l)?;
            if row.len() != n + 1 {
                return Err(Error::Parse(format!("line {l:?} needs {} numbers", n + 1)));
            }
            let t = sorted_tuple(row[..n].to_vec())?;
            if t.iter().any(|&x| x >= v) {
                return Err(Error::OutOfRange(format!("tuple {t:?} outside [0, {v})")));
            }
            let c = u8::try_from(row[n]).map_err(|_| Error::OutOfRange(format!("color {}", row[n])))?;
            if given.insert(t.clone(), c).is_some() {
                return Err(Error::Parse(format!("tuple {t:?} listed twice")));
            }
        }
        let mut missing = None;
        let out = Coloring::from_fn(n, k, v, |t| {
            given.get(t).copied().unwrap_or_else(|| {
                missing.get_or_insert_with(|| t.to_vec());
                0
            })
        })?;
        match missing {
            Some(t) => Err(Error::Parse(format!("tuple {t:?} has no color"))),
            None => Ok(out),
        }
    }
}

impl Colors for Coloring {
    fn arity(&self) -> usize {
        self.n
    }

    fn colors(&self) -> usize {
        self.k
    }

    fn color(&self, tuple: &[u64]) -> Result<u8> {
        self.map.get(tuple).copied().ok_or_else(|| Error::OutOfRange(format!("{tuple:?} is not an {}-subset of [0, {})", self.n, self.vertices)))
    }
}

/// Pairwise disjoint classes `A_0, .., A_{k-1}` of sorted `(n-1)`-subsets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilySystem {
    pub classes: Vec<Vec<Vec<u64>>>,
}

impl FamilySystem {
    pub fn new(classes: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut classes = classes;
        for class in &mut classes {
            for e in class.iter_mut() {
                e.sort_unstable();
                if !seen.insert(e.clone()) {
                    return Err(Error::Invalid(format!("{e:?} lies in two classes")));
                }
            }
            class.sort();
        }
        if seen.is_empty() {
            return Err(Error::Invalid("family system with every class empty".into()));
        }
        Ok(FamilySystem { classes })
    }

    fn vertices(&self) -> BTreeSet<u64> {
        self.classes.iter().flatten().flatten().copied().collect()
    }

    /// The equations `c({j} ∪ e) = i` a witness `j` must satisfy.
    fn equations(&self, j: u64) -> impl Iterator<Item = (Vec<u64>, u8)> + '_ {
        self.classes.iter().enumerate().flat_map(move |(i, class)| {
            class.iter().map(move |e| {
                let mut t = e.clone();
                t.push(j);
                t.sort_unstable();
                (t, i as u8)
            })
        })
    }
}

impl fmt::Display for FamilySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = |c: &Vec<Vec<u64>>| {
            c.iter().map(|e| format!("{{{}}}", e.iter().map(u64::to_string).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(" ")
        };
        let parts: Vec<String> = self.classes.iter().enumerate().map(|(i, c)| format!("A{i}=[{}]", class(c))).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    /// Index of the stage whose vertices the family is drawn from.
    pub stage: usize,
    pub family: FamilySystem,
    pub witness: u64,
}

/// Counts family systems over `m` items with every class of size `<= cap`.
fn family_count(m: usize, k: usize, cap: Option<usize>) -> u128 {
    let Some(cap) = cap else {
        return (k as u128 + 1).checked_pow(m as u32).map_or(u128::MAX, |x| x - 1);
    };
    // number of assignments indexed by the vector of class sizes
    let mut ways: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
    ways.insert(vec![0; k], 1);
    for _ in 0..m {
        let mut next: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
        for (sizes, w) in &ways {
            let e = next.entry(sizes.clone()).or_default();
            *e = e.saturating_add(*w);
            for i in 0..k {
                if sizes[i] < cap {
                    let mut s = sizes.clone();
                    s[i] += 1;
                    let e = next.entry(s).or_default();
                    *e = e.saturating_add(*w);
                }
            }
        }
        ways = next;
    }
    ways.values().fold(0u128, |a, w| a.saturating_add(*w)) - 1
}

/// Every family system over `items` in lexicographic order of the assignment
/// vector (unassigned first, then classes `0..k`), skipping the empty one.
fn for_each_family(items: &[Vec<u64>], k: usize, cap: Option<usize>, mut visit: impl FnMut(FamilySystem)) {
    fn go(
        i: usize,
        items: &[Vec<u64>],
        cap: usize,
        classes: &mut Vec<Vec<Vec<u64>>>,
        visit: &mut dyn FnMut(FamilySystem),
    ) {
        if i == items.len() {
            if classes.iter().any(|c| !c.is_empty()) {
                visit(FamilySystem { classes: classes.clone() });
            }
            return;
        }
        go(i + 1, items, cap, classes, visit);
        for c in 0..classes.len() {
            if classes[c].len() < cap {
                classes[c].push(items[i].clone());
                go(i + 1, items, cap, classes, visit);
                classes[c].pop();
            }
        }
    }
    go(0, items, cap.unwrap_or(usize::MAX), &mut vec![Vec::new(); k], &mut visit);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadoOptions {
    /// Largest class size processed at each stage; `None` processes every system.
    pub family_cap: Option<usize>,
    /// Most family systems one stage may process.
    pub budget: u128,
}

impl Default for RadoOptions {
    fn default() -> Self {
        RadoOptions { family_cap: None, budget: DEFAULT_FAMILY_BUDGET }
    }
}

/// Finite stages of the random `n`-hypergraph with `k` colors. Stage `X_l` is
/// the initial segment `[0, sizes[l])`; tuples never set by a witness have color 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadoTable {
    pub n: usize,
    pub k: usize,
    pub options: RadoOptions,
    pub sizes: Vec<u64>,
    #[serde(with = "color_map")]
    colors: BTreeMap<Vec<u64>, u8>,
    pub log: Vec<WitnessEntry>,
}

mod color_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<Vec<u64>, u8>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Vec<u64>, u8>, D::Error> {
        Ok(Vec::<(Vec<u64>, u8)>::deserialize(d)?.into_iter().collect())
    }
}

pub fn build_rado(n: usize, k: usize, stages: usize) -> Result<RadoTable> {
    build_rado_with(n, k, stages, RadoOptions::default())
}

pub fn build_rado_with(n: usize, k: usize, stages: usize, options: RadoOptions) -> Result<RadoTable> {
    if n < 2 || !(2..=255).contains(&k) {
        return Err(Error::Invalid(format!("random hypergraph needs n >= 2 and 2 <= k <= 255, got n={n} k={k}")));
    }
    cap_check("stages", stages, STAGE_CAP)?;
    let mut t = RadoTable { n, k, options, sizes: vec![n as u64 - 1], colors: BTreeMap::new(), log: Vec::new() };
    for _ in 0..stages {
        t.process_stage()?;
    }
    Ok(t)
}

impl RadoTable {
    /// Number of vertices, `|X_last|`.
    pub fn size(&self) -> u64 {
        *self.sizes.last().expect("X_0 always present")
    }

    /// Number of processed stages.
    pub fn stages(&self) -> usize {
        self.sizes.len() - 1
    }

    /// Whether a witness set this tuple's color (otherwise it is 0 by totalization).
    pub fn is_set(&self, tuple: &[u64]) -> bool {
        self.colors.contains_key(tuple)
    }

    fn process_stage(&mut self) -> Result<()> {
        let stage = self.stages();
        let verts: Vec<u64> = (0..self.size()).collect();
        let items = subsets(&verts, self.n - 1);
        let count = family_count(items.len(), self.k, self.options.family_cap);
        if count > self.options.budget {
            return Err(Error::CapExceeded {
                what: format!("family systems at stage {stage}"),
                size: usize::try_from(count).unwrap_or(usize::MAX),
                cap: usize::try_from(self.options.budget).unwrap_or(usize::MAX),
            });
        }
        let mut families = Vec::new();
        for_each_family(&items, self.k, self.options.family_cap, |f| families.push(f));
        for f in families {
            self.extend(stage, f);
        }
        let top = self.next_vertex();
        self.sizes.push(top);
        Ok(())
    }

    /// Allocates the least fresh vertex as witness for `fam` and sets only the colors it needs.
    fn extend(&mut self, stage: usize, fam: FamilySystem) -> u64 {
        let j = self.next_vertex();
        for (t, c) in fam.equations(j) {
            self.colors.insert(t, c);
        }
        self.log.push(WitnessEntry { stage, family: fam, witness: j });
        j
    }

    fn next_vertex(&self) -> u64 {
        self.log.last().map_or(self.size(), |e| (e.witness + 1).max(self.size()))
    }

    /// Makes the vertices allocated since the last stage boundary part of the table.
    fn close(&mut self) {
        let top = self.next_vertex();
        let last = self.sizes.len() - 1;
        self.sizes[last] = top;
    }

    fn satisfies(&self, j: u64, fam: &FamilySystem) -> bool {
        fam.equations(j).all(|(t, c)| self.colors.get(&t).copied().unwrap_or(0) == c)
    }

    fn check_family(&self, fam: &FamilySystem) -> Result<()> {
        if fam.classes.len() != self.k {
            return Err(Error::Invalid(format!("family has {} classes, table has {} colors", fam.classes.len(), self.k)));
        }
        for e in fam.classes.iter().flatten() {
            if e.len() != self.n - 1 {
                return Err(Error::Invalid(format!("{e:?} is not an {}-subset", self.n - 1)));
            }
            if e.iter().any(|&x| x >= self.size()) {
                return Err(Error::OutOfRange(format!("{e:?} outside the table")));
            }
        }
        Ok(())
    }

    fn witness_avoiding(&self, fam: &FamilySystem, avoid: &BTreeSet<u64>) -> Option<u64> {
        let used = fam.vertices();
        (0..self.size()).find(|j| !used.contains(j) && !avoid.contains(j) && self.satisfies(*j, fam))
    }
}

impl Colors for RadoTable {
    fn arity(&self) -> usize {
        self.n
    }

    fn colors(&self) -> usize {
        self.k
    }

    fn color(&self, tuple: &[u64]) -> Result<u8> {
        if tuple.len() != self.n || tuple.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!("{tuple:?} is not a sorted {}-subset", self.n)));
        }
        if tuple.iter().any(|&x| x >= self.size()) {
            return Err(Error::OutOfRange(format!("{tuple:?} outside [0, {})", self.size())));
        }
        Ok(self.colors.get(tuple).copied().unwrap_or(0))
    }
}

/// Least vertex of the table outside the family satisfying all its equations.
pub fn star_witness(t: &RadoTable, fam: &FamilySystem) -> Result<Option<u64>> {
    t.check_family(fam)?;
    Ok(t.witness_avoiding(fam, &BTreeSet::new()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    /// Size of the stage the families were drawn from.
    pub source: u64,
    pub checked: usize,
    pub missing: Vec<FamilySystem>,
}

/// Every family system with classes of size `<= cap` over the last stage that
/// was processed (over `X_0` when none was) must have a witness in the table.
pub fn star_check_exhaustive(t: &RadoTable, cap: usize) -> Result<StarReport> {
    let source = t.sizes[t.sizes.len().saturating_sub(2)];
    let verts: Vec<u64> = (0..source).collect();
    let items = subsets(&verts, t.n - 1);
    let count = family_count(items.len(), t.k, Some(cap));
    if count > DEFAULT_FAMILY_BUDGET {
        return Err(Error::CapExceeded { what: "star check families".into(), size: usize::try_from(count).unwrap_or(usize::MAX), cap: DEFAULT_FAMILY_BUDGET as usize });
    }
    let mut report = StarReport { source, checked: 0, missing: Vec::new() };
    if cap == 0 {
        return Ok(report);
    }
    for_each_family(&items, t.k, Some(cap), |f| {
        report.checked += 1;
        if t.witness_avoiding(&f, &BTreeSet::new()).is_none() {
            report.missing.push(f);
        }
    });
    Ok(report)
}

/// The family a new vertex `v` must realize: `A_i = { f[s] : c(s ∪ {v}) = i }`.
fn embedding_family(c: &impl Colors, f: &[u64], v: u64) -> Result<FamilySystem> {
    let n = c.arity();
    let prev: Vec<u64> = (0..v).collect();
    let mut classes = vec![Vec::new(); c.colors()];
    for s in subsets(&prev, n - 1) {
        let mut t = s.clone();
        t.push(v);
        let i = c.color(&t)? as usize;
        classes[i].push(s.iter().map(|&x| f[x as usize]).collect());
    }
    FamilySystem::new(classes)
}

fn embed_inner(c: &impl Colors, t: &mut RadoTable, vertices: u64, grow: bool) -> Result<Vec<u64>> {
    let n = c.arity();
    if n != t.n || c.colors() != t.k {
        return Err(Error::Invalid(format!("coloring is ({n},{}), table is ({},{})", c.colors(), t.n, t.k)));
    }
    let mut f: Vec<u64> = (0..(n as u64 - 1).min(vertices)).collect();
    let mut image: BTreeSet<u64> = f.iter().copied().collect();
    for v in f.len() as u64..vertices {
        let fam = embedding_family(c, &f, v)?;
        let j = match t.witness_avoiding(&fam, &image) {
            Some(j) => j,
            None if grow => {
                let stage = t.stages();
                let j = t.extend(stage, fam);
                t.close();
                j
            }
            None => return Err(Error::NotFound(format!("no witness in the table for vertex {v}: {fam}"))),
        };
        f.push(j);
        image.insert(j);
    }
    Ok(f)
}

/// Injective `f` with `c(a) = table(f[a])`, built vertex by vertex from star witnesses.
pub fn embed_coloring(c: &Coloring, t: &RadoTable) -> Result<Vec<u64>> {
    embed_inner(c, &mut t.clone(), c.vertices, false)
}

/// As [`embed_coloring`], but a family with no witness in the table gets a fresh
/// vertex allocated exactly as a later stage would.
pub fn embed_coloring_extending(c: &Coloring, t: &mut RadoTable) -> Result<Vec<u64>> {
    embed_inner(c, t, c.vertices, true)
}

/// Checks `c(a) = table(f[a])` over every `n`-subset `a`; returns the first failure.
pub fn verify_embedding(c: &Coloring, t: &RadoTable, f: &[u64]) -> Result<Option<Vec<u64>>> {
    if f.len() as u64 != c.vertices || f.iter().collect::<BTreeSet<_>>().len() != f.len() {
        return Ok(Some(vec![]));
    }
    for (a, col) in c.entries() {
        let mut img: Vec<u64> = a.iter().map(|&x| f[x as usize]).collect();
        img.sort_unstable();
        if t.color(&img)? != col {
            return Ok(Some(a.clone()));
        }
    }
    Ok(None)
}

fn color_set(c: &impl Colors, part: &[u64]) -> Result<BTreeSet<u8>> {
    let mut v = part.to_vec();
    v.sort_unstable();
    subsets(&v, c.arity()).iter().map(|t| c.color(t)).collect()
}

/// Least number of parts covering `a`, each part's `n`-subsets using at most `l` colors.
pub fn phi_rnkl(c: &impl Colors, a: &[u64], l: usize) -> Result<u64> {
    if l >= c.colors() {
        return Err(Error::Invalid(format!("l = {l} must be below k = {}", c.colors())));
    }
    let a: Vec<u64> = a.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    cap_check("phi_rnkl set", a.len(), RNKL_CAP)?;
    for t in subsets(&a, c.arity()) {
        c.color(&t)?;
    }
    let (k, _) = exact::min_partition(a.len(), |part, x| {
        let mut v: Vec<u64> = part.iter().map(|&i| a[i]).collect();
        v.push(a[x]);
        color_set(c, &v).is_ok_and(|s| s.len() <= l)
    });
    Ok(k as u64)
}

/// Color of a pair under the `ED~_m` witness coloring: first separation level, capped at `m+1`.
pub fn edm_coloring(m: usize, pair: (u64, u64)) -> Result<u8> {
    let s = tree::separation_level(pair.0, pair.1)?;
    u8::try_from(s.min(m + 1)).map_err(|_| Error::OutOfRange(format!("m = {m}")))
}

/// The `ED~_m` coloring as a pair coloring of `[0, V)`.
pub fn edm_pair_coloring(m: usize, vertices: u64) -> Result<Coloring> {
    let mut err = None;
    let c = Coloring::from_fn(2, m + 2, vertices, |t| {
        edm_coloring(m, (t[0], t[1])).unwrap_or_else(|e| {
            err = Some(e);
            0
        })
    })?;
    err.map_or(Ok(c), Err)
}

/// Lexicographically least `N`-subset of `[0, V)` whose `n`-subsets use at most `l` colors.
pub fn find_homogeneous(c: &Coloring, size: usize, l: usize, budget: u128) -> Result<Option<Vec<u64>>> {
    let combos = binomial(c.vertices, size as u64);
    if combos > budget {
        return Err(Error::CapExceeded { what: "homogeneous search".into(), size: usize::try_from(combos).unwrap_or(usize::MAX), cap: usize::try_from(budget).unwrap_or(usize::MAX) });
    }
    let verts: Vec<u64> = (0..c.vertices).collect();
    for s in subsets(&verts, size) {
        if color_set(c, &s)?.len() <= l {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Whether every 2-coloring of the edges of `K_v` has a monochromatic triangle,
/// by running through all `2^(v choose 2)` colorings. `v <= 7`.
pub fn every_coloring_has_mono_triangle(v: u64) -> Result<bool> {
    cap_check("ramsey vertices", v as usize, 7)?;
    let verts: Vec<u64> = (0..v).collect();
    let edges = subsets(&verts, 2);
    let index: BTreeMap<Vec<u64>, usize> = edges.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let triangles: Vec<[usize; 3]> = subsets(&verts, 3)
        .iter()
        .map(|t| [index[&vec![t[0], t[1]]], index[&vec![t[0], t[2]]], index[&vec![t[1], t[2]]]])
        .collect();
    Ok((0u64..1 << edges.len()).all(|mask| {
        triangles.iter().any(|tr| {
            let b = tr.map(|e| mask >> e & 1);
            b[0] == b[1] && b[1] == b[2]
        })
    }))
}
