//! Exact gradings for the ideals of the workbench. A finite set `a` is in the
//! ideal at resolution `B` when `phi(a) <= B`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clopen;
use crate::error::{cap_check, Error, Result};
use crate::exact;
use crate::ground::{parse_rational, FiniteSubset, Ground, GroundKind};
use crate::scalar::Scalar;
use crate::tree::{self, NodePath};
use crate::Rational;

pub const PHI_R_CAP: usize = 20;
pub const PHI_PC_CAP: usize = 16;
pub const PARTITION_CAP: usize = 20;
pub const GFC_VERTEX_CAP: usize = 16;
pub const K_VERTEX_CAP: usize = 24;
pub const BRUTE_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubmeasureValue {
    Finite(u64),
    Infinite,
}

impl SubmeasureValue {
    pub fn finite(&self) -> Option<u64> {
        match self {
            SubmeasureValue::Finite(v) => Some(*v),
            SubmeasureValue::Infinite => None,
        }
    }
}

impl From<u64> for SubmeasureValue {
    fn from(v: u64) -> Self {
        SubmeasureValue::Finite(v)
    }
}

impl From<usize> for SubmeasureValue {
    fn from(v: usize) -> Self {
        SubmeasureValue::Finite(v as u64)
    }
}

impl Add for SubmeasureValue {
    type Output = SubmeasureValue;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (SubmeasureValue::Finite(a), SubmeasureValue::Finite(b)) => a.checked_add(b).map_or(SubmeasureValue::Infinite, SubmeasureValue::Finite),
            _ => SubmeasureValue::Infinite,
        }
    }
}

impl fmt::Display for SubmeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubmeasureValue::Finite(v) => write!(f, "{v}"),
            SubmeasureValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for SubmeasureValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SubmeasureValue::Finite(v) => s.serialize_u64(*v),
            SubmeasureValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SubmeasureValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(v) => Ok(SubmeasureValue::Finite(v)),
            Raw::S(s) if s == "inf" => Ok(SubmeasureValue::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad submeasure value {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowthRule {
    /// No values past the table.
    None,
    /// `f(n) = f(n-1) + slope`.
    Affine { slope: u64 },
    /// `f(n) = f(n-1) * (n+1)`.
    Factorial,
}

/// A nondecreasing function `ω → ω \ {0}` given by a table and an extension rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrowthFunction {
    table: Vec<u64>,
    rule: GrowthRule,
}

impl GrowthFunction {
    pub fn new(table: Vec<u64>, rule: GrowthRule) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Invalid("growth function needs at least one value".into()));
        }
        if table.contains(&0) {
            return Err(Error::Invalid("growth function values must be >= 1".into()));
        }
        if table.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid("growth function must be nondecreasing".into()));
        }
        Ok(GrowthFunction { table, rule })
    }

    /// `f(n) = n + 1`.
    pub fn successor() -> Self {
        GrowthFunction { table: vec![1], rule: GrowthRule::Affine { slope: 1 } }
    }

    /// `f(n) = (n+1)!`.
    pub fn factorial() -> Self {
        GrowthFunction { table: vec![1], rule: GrowthRule::Factorial }
    }

    pub fn constant(c: u64) -> Result<Self> {
        GrowthFunction::new(vec![c], GrowthRule::Affine { slope: 0 })
    }

    pub fn eval(&self, n: usize) -> Result<u64> {
        if let Some(&v) = self.table.get(n) {
            return Ok(v);
        }
        let last = self.table.len() - 1;
        let base = self.table[last];
        let overflow = || Error::Overflow(format!("growth function at {n}"));
        match self.rule {
            GrowthRule::None => Err(Error::OutOfRange(format!("growth function has no value at {n}"))),
            GrowthRule::Affine { slope } => slope
                .checked_mul((n - last) as u64)
                .and_then(|d| base.checked_add(d))
                .ok_or_else(overflow),
            GrowthRule::Factorial => (last + 1..=n).try_fold(base, |acc, i| acc.checked_mul(i as u64 + 1)).ok_or_else(overflow),
        }
    }

    /// `g(n) = 2 · Π_{i<=n} 2^{(i+1) f(i)} · f(i)`, the growth that makes the
    /// level-by-level choosing strategy work against `TB(g)`.
    pub fn tb_big(&self, n: usize) -> Result<u64> {
        let mut g: u64 = 2;
        for i in 0..=n {
            let fi = self.eval(i)?;
            let e = (i as u64 + 1).checked_mul(fi).filter(|&e| e < 64).ok_or_else(|| Error::Overflow(format!("g at {n}")))?;
            g = g
                .checked_mul(1u64 << e)
                .and_then(|x| x.checked_mul(fi))
                .ok_or_else(|| Error::Overflow(format!("g at {n}")))?;
        }
        Ok(g)
    }
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.table.iter().map(u64::to_string).collect();
        write!(f, "{}", t.join("/"))?;
        match self.rule {
            GrowthRule::None => Ok(()),
            GrowthRule::Affine { slope } => write!(f, "+{slope}"),
            GrowthRule::Factorial => write!(f, "!"),
        }
    }
}

impl FromStr for GrowthFunction {
    type Err = Error;

    /// `1/2/3` (table only), `1+1` (table then affine slope 1), `1!` (factorial rule).
    /// The shorthands `n+1` and `fact` are also accepted.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "n+1" => return Ok(GrowthFunction::successor()),
            "fact" => return Ok(GrowthFunction::factorial()),
            _ => {}
        }
        let (table, rule) = if let Some(body) = t.strip_suffix('!') {
            (body, GrowthRule::Factorial)
        } else if let Some((body, slope)) = t.split_once('+') {
            let slope = slope.parse().map_err(|_| Error::Parse(format!("bad slope in {s:?}")))?;
            (body, GrowthRule::Affine { slope })
        } else {
            (t, GrowthRule::None)
        };
        let table = table
            .split('/')
            .map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("bad growth value in {s:?}"))))
            .collect::<Result<Vec<u64>>>()?;
        GrowthFunction::new(table, rule)
    }
}

fn sorted_unique<T: Ord + Clone>(a: &[T]) -> Vec<T> {
    let mut v = a.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Least number of columns and function graphs covering `a`: with fiber sizes
/// `s_1 >= s_2 >= ..` over the first coordinate, `min_j (j + s_{j+1})`.
pub fn phi_ed(a: &[(u64, u64)]) -> u64 {
    let a = sorted_unique(a);
    let mut sizes: Vec<u64> = Vec::new();
    let mut i = 0;
    while i < a.len() {
        let j = a[i..].iter().take_while(|p| p.0 == a[i].0).count();
        sizes.push(j as u64);
        i += j;
    }
    sizes.sort_unstable_by(|x, y| y.cmp(x));
    (0..=sizes.len()).map(|j| j as u64 + sizes.get(j).copied().unwrap_or(0)).min().unwrap_or(0)
}

pub fn phi_ed_fin(a: &[(u64, u64)]) -> Result<u64> {
    if let Some((n, m)) = a.iter().find(|(n, m)| m > n) {
        return Err(Error::Invalid(format!("({n},{m}) is outside the lower triangle")));
    }
    Ok(phi_ed(a))
}

/// Whether a set of pairs lies in a single column or in a function graph.
pub fn ed_generator_fits(part: &[&(u64, u64)]) -> bool {
    let one_column = part.windows(2).all(|w| w[0].0 == w[1].0);
    let mut firsts: Vec<u64> = part.iter().map(|p| p.0).collect();
    firsts.sort_unstable();
    let function = firsts.windows(2).all(|w| w[0] != w[1]);
    one_column || function
}

/// Least number of fitting parts covering `a`, by dynamic programming over all
/// subsets. `fits` must be closed under subsets. The reference oracle.
pub fn brute_cover_number<E>(a: &[E], fits: impl Fn(&[&E]) -> bool) -> Result<u64> {
    cap_check("brute_cover_number set", a.len(), BRUTE_CAP)?;
    let n = a.len();
    Ok(exact::min_partition_bitmask(n, |mask| {
        let part: Vec<&E> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &a[i]).collect();
        fits(&part)
    }) as u64)
}

/// The BIT graph: for `a < b`, an edge exactly when bit `a` of `b` is set.
pub fn rado_edge(i: u64, j: u64) -> Result<bool> {
    if i == j {
        return Err(Error::Invalid("rado_edge needs distinct vertices".into()));
    }
    let (a, b) = (i.min(j), i.max(j));
    Ok(a < 64 && b >> a & 1 == 1)
}

fn edge(i: u64, j: u64) -> bool {
    rado_edge(i, j).expect("distinct vertices")
}

pub fn phi_r(a: &[u64]) -> Result<u64> {
    phi_r_capped(a, PHI_R_CAP)
}

/// Least number of cliques and anticliques of the BIT graph covering `a`.
pub fn phi_r_capped(a: &[u64], cap: usize) -> Result<u64> {
    let a = sorted_unique(a);
    cap_check("phi_r set", a.len(), cap)?;
    let (k, _) = exact::min_partition(a.len(), |part, x| {
        if part.len() < 2 {
            return true;
        }
        let kind = edge(a[part[0]], a[part[1]]);
        part.iter().all(|&y| edge(a[y], a[x]) == kind)
    });
    Ok(k as u64)
}

pub fn is_rado_homogeneous(a: &[u64]) -> bool {
    let a = sorted_unique(a);
    if a.len() < 3 {
        return true;
    }
    let kind = edge(a[0], a[1]);
    a.iter().enumerate().all(|(i, &x)| a[i + 1..].iter().all(|&y| edge(x, y) == kind))
}

/// All pairwise separation levels equal: the set meets distinct children of one node.
pub fn is_selector(a: &[u64]) -> Result<bool> {
    let mut level = None;
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i + 1..] {
            let l = tree::separation_level(x, y)?;
            if *level.get_or_insert(l) != l {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn phi_pc(a: &[u64], depth: Option<usize>) -> Result<u64> {
    phi_pc_capped(a, depth, PHI_PC_CAP)
}

/// Least number of selectors and small-branching traces covering `a`. The
/// trace is read at `depth`, which must reach one level past the deepest
/// separation (below that every branch is alone).
pub fn phi_pc_capped(a: &[u64], depth: Option<usize>, cap: usize) -> Result<u64> {
    let a = sorted_unique(a);
    cap_check("phi_pc set", a.len(), cap)?;
    let need = tree::max_separation(&a)?.map_or(0, |s| s + 1);
    let depth = match depth {
        Some(d) if d < need => {
            return Err(Error::Invalid(format!("depth {d} is below the separation depth {need}")));
        }
        Some(d) => d,
        None => need,
    };
    let fits = |part: &[u64]| -> bool {
        part.len() <= 1
            || is_selector(part).unwrap_or(false)
            || tree::is_small_branching(&tree::trace_tree(part, depth)).unwrap_or(false)
    };
    let (k, _) = exact::min_partition(a.len(), |part, x| {
        let mut v: Vec<u64> = part.iter().map(|&i| a[i]).collect();
        v.push(a[x]);
        fits(&v)
    });
    Ok(k as u64)
}

/// Generators: level-`(m+1)` nodes and selectors below any node.
pub fn edm_generator_fits(m: usize, part: &[u64]) -> Result<bool> {
    let mut all_deep = true;
    for (i, &x) in part.iter().enumerate() {
        for &y in &part[i + 1..] {
            if tree::separation_level(x, y)? <= m {
                all_deep = false;
            }
        }
    }
    Ok(all_deep || is_selector(part)?)
}

pub fn phi_edm(m: usize, a: &[u64]) -> Result<u64> {
    let a = sorted_unique(a);
    cap_check("phi_edm set", a.len(), PARTITION_CAP)?;
    let (k, _) = exact::min_partition(a.len(), |part, x| {
        let mut v: Vec<u64> = part.iter().map(|&i| a[i]).collect();
        v.push(a[x]);
        edm_generator_fits(m, &v).unwrap_or(false)
    });
    Ok(k as u64)
}

pub fn is_f_small_trace(a: &[u64], f: &GrowthFunction, depth: usize) -> Result<bool> {
    let counts = tree::level_counts(&tree::trace_tree(a, depth), depth);
    for (n, &c) in counts.iter().enumerate() {
        if c as u64 > f.eval(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least number of parts with `f`-small traces to `depth` covering `a`.
pub fn phi_tc(f: &GrowthFunction, a: &[u64], depth: usize) -> Result<u64> {
    let a = sorted_unique(a);
    cap_check("phi_tc set", a.len(), PARTITION_CAP)?;
    // validate the range of f once so the search cannot fail midway
    for n in 0..=depth {
        f.eval(n)?;
    }
    let (k, _) = exact::min_partition(a.len(), |part, x| {
        let mut v: Vec<u64> = part.iter().map(|&i| a[i]).collect();
        v.push(a[x]);
        is_f_small_trace(&v, f, depth).expect("f validated on 0..=depth")
    });
    Ok(k as u64)
}

/// Every node of the trace above `depth` has at least `ceil(r f(level))` successors.
pub fn tb_positive_witness(a: &[u64], f: &GrowthFunction, r: Rational, depth: usize) -> Result<bool> {
    if r <= Rational::new(0, 1) {
        return Err(Error::Invalid("r must be positive".into()));
    }
    let t = tree::trace_tree(a, depth);
    let mut succ: std::collections::BTreeMap<NodePath, u64> = std::collections::BTreeMap::new();
    for s in &t {
        if let Some(p) = s.parent() {
            *succ.entry(p).or_default() += 1;
        }
    }
    for s in t.iter().filter(|s| s.len() < depth) {
        let need = (r * Rational::from_integer(f.eval(s.len())? as i64)).ceil().to_integer() as u64;
        if succ.get(s).copied().unwrap_or(0) < need {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Adjacency masks of the graph spanned by `edges`, vertices relabelled in increasing order.
pub fn edge_graph(edges: &[(u64, u64)], cap: usize) -> Result<Vec<u64>> {
    let mut verts: Vec<u64> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    cap_check("graph vertices", verts.len(), cap)?;
    let idx = |v: u64| verts.binary_search(&v).expect("vertex listed");
    let mut adj = vec![0u64; verts.len()];
    for &(a, b) in edges {
        if a == b {
            return Err(Error::Invalid(format!("loop at {a}")));
        }
        let (i, j) = (idx(a), idx(b));
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    Ok(adj)
}

/// Least `k` such that the graph is a union of `k` bipartite graphs, i.e. `ceil(log2 χ)`.
pub fn phi_gfc(edges: &[(u64, u64)]) -> Result<u64> {
    let adj = edge_graph(edges, GFC_VERTEX_CAP)?;
    let chi = exact::chromatic_number(&adj) as u64;
    Ok(if chi <= 1 { 0 } else { 64 - (chi - 1).leading_zeros() as u64 })
}

/// Clique number of the graph with edge set `edges`; 0 for no edges.
pub fn phi_k(edges: &[(u64, u64)]) -> Result<u64> {
    let adj = edge_graph(edges, K_VERTEX_CAP)?;
    Ok(exact::clique_number(&adj) as u64)
}

/// Least number of closed intervals of length `eps` covering `a`, by the left-to-right sweep.
pub fn conv_cluster_count<T: Scalar>(a: &[T], eps: &T) -> Result<u64> {
    if *eps <= T::zero() {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    let mut v = a.to_vec();
    v.sort_by(|x, y| x.partial_cmp(y).expect("comparable scalars"));
    let mut count = 0;
    let mut reach: Option<T> = None;
    for x in v {
        if reach.as_ref().is_none_or(|r| x > *r) {
            count += 1;
            reach = Some(x + eps.clone());
        }
    }
    Ok(count)
}

/// A named ideal with its parameters; parsed from `name[:key=value,...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSpec {
    Ed,
    EdFin,
    R { cap: usize },
    Pc,
    Edm { m: usize },
    Tc { f: GrowthFunction },
    Gfc,
    K,
    Conv { eps: Rational },
    Somega { depth: usize, n: usize },
}

pub const IDEAL_NAMES: &[&str] = &["ed", "ed-fin", "r", "pc", "edm", "tc", "gfc", "k", "conv", "somega"];

impl IdealSpec {
    pub fn ground(&self) -> Ground {
        match self {
            IdealSpec::Ed => Ground::Pairs,
            IdealSpec::EdFin => Ground::LowerTriangle,
            IdealSpec::R { .. } | IdealSpec::Pc | IdealSpec::Edm { .. } | IdealSpec::Tc { .. } => Ground::Naturals,
            IdealSpec::Gfc | IdealSpec::K => Ground::EdgeSet,
            IdealSpec::Conv { .. } => Ground::Rationals01,
            IdealSpec::Somega { depth, .. } => Ground::Omega { depth: *depth },
        }
    }

    /// Whether the grading counts generators, and so is subadditive.
    pub fn is_cover_grading(&self) -> bool {
        !matches!(self, IdealSpec::K | IdealSpec::Gfc)
    }

    pub fn eval(&self, a: &FiniteSubset) -> Result<SubmeasureValue> {
        let want = self.ground().kind();
        if a.ground.kind() != want {
            return Err(Error::WrongGround { expected: want.to_string(), got: a.ground.kind().to_string() });
        }
        Ok(match self {
            IdealSpec::Ed => phi_ed(&a.pairs(GroundKind::Pairs)?).into(),
            IdealSpec::EdFin => phi_ed_fin(&a.pairs(GroundKind::LowerTriangle)?)?.into(),
            IdealSpec::R { cap } => phi_r_capped(&a.naturals()?, *cap)?.into(),
            IdealSpec::Pc => phi_pc(&a.naturals()?, None)?.into(),
            IdealSpec::Edm { m } => phi_edm(*m, &a.naturals()?)?.into(),
            IdealSpec::Tc { f } => {
                let v = a.naturals()?;
                let depth = tree::max_separation(&v)?.map_or(0, |s| s + 1);
                phi_tc(f, &v, depth)?.into()
            }
            IdealSpec::Gfc => phi_gfc(&a.pairs(GroundKind::EdgeSet)?)?.into(),
            IdealSpec::K => phi_k(&a.pairs(GroundKind::EdgeSet)?)?.into(),
            IdealSpec::Conv { eps } => conv_cluster_count(&a.rationals()?, eps)?.into(),
            IdealSpec::Somega { n, .. } => clopen::phi_sn(*n, &a.clopens()?)?,
        })
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealSpec::Ed => write!(f, "ed"),
            IdealSpec::EdFin => write!(f, "ed-fin"),
            IdealSpec::R { cap } if *cap == PHI_R_CAP => write!(f, "r"),
            IdealSpec::R { cap } => write!(f, "r:cap={cap}"),
            IdealSpec::Pc => write!(f, "pc"),
            IdealSpec::Edm { m } => write!(f, "edm:m={m}"),
            IdealSpec::Tc { f: g } => write!(f, "tc:f={g}"),
            IdealSpec::Gfc => write!(f, "gfc"),
            IdealSpec::K => write!(f, "k"),
            IdealSpec::Conv { eps } => write!(f, "conv:eps={}/{}", eps.numer(), eps.denom()),
            IdealSpec::Somega { depth, n } => write!(f, "somega:depth={depth},n={n}"),
        }
    }
}

/// Splits `name:k=v,k2=v2` into the name and its parameters.
pub fn parse_params(s: &str) -> Result<(String, Vec<(String, String)>)> {
    let (name, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
    let mut params = Vec::new();
    for kv in rest.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("parameter {kv:?} is not key=value")))?;
        params.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok((name.to_string(), params))
}

pub(crate) fn take_param<T: FromStr>(params: &mut Vec<(String, String)>, key: &str) -> Result<Option<T>> {
    match params.iter().position(|(k, _)| k == key) {
        None => Ok(None),
        Some(i) => {
            let (_, v) = params.remove(i);
            v.parse().map(Some).map_err(|_| Error::Parse(format!("bad value {v:?} for {key}")))
        }
    }
}

pub(crate) fn no_more_params(name: &str, params: &[(String, String)]) -> Result<()> {
    match params.first() {
        None => Ok(()),
        Some((k, _)) => Err(Error::Parse(format!("unknown parameter {k:?} for {name}"))),
    }
}

impl FromStr for IdealSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, mut p) = parse_params(s)?;
        let spec = match name.as_str() {
            "ed" => IdealSpec::Ed,
            "ed-fin" => IdealSpec::EdFin,
            "r" => IdealSpec::R { cap: take_param(&mut p, "cap")?.unwrap_or(PHI_R_CAP) },
            "pc" => IdealSpec::Pc,
            "edm" => IdealSpec::Edm { m: take_param(&mut p, "m")?.unwrap_or(0) },
            "tc" => IdealSpec::Tc { f: take_param(&mut p, "f")?.unwrap_or_else(GrowthFunction::successor) },
            "gfc" => IdealSpec::Gfc,
            "k" => IdealSpec::K,
            "conv" => {
                let eps = match p.iter().position(|(k, _)| k == "eps") {
                    Some(i) => parse_rational(&p.remove(i).1)?,
                    None => Rational::new(1, 8),
                };
                if eps <= Rational::new(0, 1) {
                    return Err(Error::Invalid("eps must be positive".into()));
                }
                IdealSpec::Conv { eps }
            }
            "somega" => IdealSpec::Somega {
                depth: take_param(&mut p, "depth")?.unwrap_or(3),
                n: take_param(&mut p, "n")?.unwrap_or(0),
            },
            other => return Err(Error::NotFound(format!("ideal {other:?}"))),
        };
        no_more_params(&name, &p)?;
        Ok(spec)
    }
}

impl Serialize for IdealSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IdealSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
