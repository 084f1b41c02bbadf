//! Katětov maps checked at finite resolution: the preimage of a source
//! generator, cut to a growing target window, should stay small in the target.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clopen::{self, BitString};
use crate::error::{cap_check, Error, Result};
use crate::ground::{Elem, FiniteSubset, Ground};
use crate::hypergraph::{self, Coloring, Colors, RadoTable};
use crate::ideals::{IdealSpec, SubmeasureValue};
use crate::tree::{self, NodePath};
use crate::Rational;

/// Family cap for `φ_n` inside reduction checks, above the grading default.
pub const SN_CHECK_CAP: usize = 96;

/// A set of the source ground, given by a membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// Rationals within `radius` of `center`.
    Ball { center: Rational, radius: Rational },
    /// The column `{n} × ω`.
    Column(u64),
    /// Members of a tree node.
    Node(NodePath),
    /// Clopen sets containing the cylinder of a string.
    Cylinder(BitString),
    Finite(BTreeSet<Elem>),
}

impl Generator {
    pub fn contains(&self, e: &Elem) -> bool {
        match (self, e) {
            (Generator::Ball { center, radius }, Elem::Rat(q)) => {
                let d = *q - *center;
                (if d < Rational::new(0, 1) { -d } else { d }) <= *radius
            }
            (Generator::Column(n), Elem::Pair(a, _)) => a == n,
            (Generator::Node(s), Elem::Nat(n)) => tree::in_node(*n, s),
            (Generator::Cylinder(x), Elem::Clopen(u)) => u.contains_cylinder(x),
            (Generator::Finite(v), e) => v.contains(e),
            _ => false,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Ball { center, radius } => write!(f, "ball:{center},{radius}"),
            Generator::Column(n) => write!(f, "column:{n}"),
            Generator::Node(s) => write!(f, "node:{}", s.0.iter().map(u64::to_string).collect::<Vec<_>>().join(".")),
            Generator::Cylinder(x) => write!(f, "cylinder:{x}"),
            Generator::Finite(v) => write!(f, "set:{}", v.iter().map(Elem::to_string).collect::<Vec<_>>().join(";")),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let nat = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let rat = |t: &str| -> Result<Rational> {
            match t.split_once('/') {
                Some((a, b)) => {
                    let (a, b) = (a.parse::<i64>().map_err(|_| bad())?, b.parse::<i64>().map_err(|_| bad())?);
                    if b == 0 {
                        return Err(bad());
                    }
                    Ok(Rational::new(a, b))
                }
                None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
            }
        };
        match kind {
            "ball" => {
                let (c, r) = rest.split_once(',').ok_or_else(bad)?;
                Ok(Generator::Ball { center: rat(c)?, radius: rat(r)? })
            }
            "column" => Ok(Generator::Column(nat(rest)?)),
            "node" if rest.is_empty() => Ok(Generator::Node(NodePath::root())),
            "node" => Ok(Generator::Node(NodePath(rest.split('.').map(nat).collect::<Result<_>>()?))),
            "cylinder" => Ok(Generator::Cylinder(rest.parse()?)),
            "set" => {
                let v: Result<BTreeSet<u64>> = rest.split(';').filter(|t| !t.is_empty()).map(nat).collect();
                Ok(Generator::Finite(v?.into_iter().map(Elem::Nat).collect()))
            }
            _ => Err(bad()),
        }
    }
}

/// A map from target ground elements to source ground elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KatetovMap {
    Identity,
    Constant(Elem),
    /// `U ↦ y_U`.
    YU,
    /// A vertex map `x ↦ f[x]`, with the coloring and table it was built from.
    Embedding { f: Vec<u64>, coloring: Coloring, table: RadoTable },
}

impl KatetovMap {
    pub fn name(&self) -> &'static str {
        match self {
            KatetovMap::Identity => "identity",
            KatetovMap::Constant(_) => "constant",
            KatetovMap::YU => "y-u",
            KatetovMap::Embedding { .. } => "embedding",
        }
    }

    pub fn apply(&self, e: &Elem) -> Result<Elem> {
        match self {
            KatetovMap::Identity => Ok(e.clone()),
            KatetovMap::Constant(c) => Ok(c.clone()),
            KatetovMap::YU => {
                let u = e.as_clopen().ok_or_else(|| Error::Invalid(format!("{e} is not a clopen set")))?;
                Ok(Elem::Rat(clopen::y_u(u)?))
            }
            KatetovMap::Embedding { f, .. } => {
                let x = e.as_nat().ok_or_else(|| Error::Invalid(format!("{e} is not a natural")))?;
                f.get(x as usize).map(|&y| Elem::Nat(y)).ok_or_else(|| Error::OutOfRange(format!("map undefined at {x}")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionSpec {
    /// Name of the source ideal; it selects the generators, not the check.
    pub source: String,
    pub target: IdealSpec,
    pub map: KatetovMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Growing,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub generator: String,
    /// `φ_target` of the preimage within each window; `None` for infinity.
    pub values: Vec<Option<u64>>,
    pub preimage_sizes: Vec<usize>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub source: String,
    pub target: String,
    pub map: String,
    pub windows: Vec<u64>,
    /// Verdicts describe the windows checked and nothing beyond them.
    pub observational: bool,
    /// For embedding maps: whether `c(a) = table(f[a])` held on every `n`-subset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    pub trajectories: Vec<Trajectory>,
}

impl ReductionReport {
    /// One JSON record per line: a header, then one trajectory per generator.
    pub fn to_jsonl(&self) -> String {
        let head = serde_json::json!({
            "source": self.source,
            "target": self.target,
            "map": self.map,
            "windows": self.windows,
            "observational": self.observational,
            "consistent": self.consistent,
        });
        let mut out = format!("{head}\n");
        for t in &self.trajectories {
            out.push_str(&serde_json::to_string(t).expect("plain data"));
            out.push('\n');
        }
        out
    }
}

/// Elements of the target ground at window `w`; over `Ω` the window is the generator depth.
pub fn target_window(ground: &Ground, w: u64) -> Result<Vec<Elem>> {
    match ground {
        Ground::Omega { .. } => Ground::Omega { depth: w as usize }.window(0),
        g => g.window(w),
    }
}

fn eval_target(target: &IdealSpec, set: Vec<Elem>) -> Result<SubmeasureValue> {
    match target {
        IdealSpec::Somega { n, .. } => {
            let x: Vec<_> = set.iter().filter_map(|e| e.as_clopen().cloned()).collect();
            clopen::phi_sn_capped(*n, &x, SN_CHECK_CAP)
        }
        t => t.eval(&FiniteSubset::new(t.ground(), set)?),
    }
}

/// Trajectories of `φ_target(f⁻¹[g] ∩ window)` over the windows, for every generator.
pub fn check_reduction(r: &ReductionSpec, generators: &[Generator], windows: &[u64]) -> Result<ReductionReport> {
    if windows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("windows must increase".into()));
    }
    let consistent = match &r.map {
        KatetovMap::Embedding { f, coloring, table } => Some(hypergraph::verify_embedding(coloring, table, f)?.is_none()),
        _ => None,
    };
    let ground = r.target.ground();
    let mut images: Vec<Vec<(Elem, Elem)>> = Vec::new();
    for &w in windows {
        let elems = target_window(&ground, w)?;
        let mut pairs = Vec::with_capacity(elems.len());
        for e in elems {
            let y = r.map.apply(&e).map_err(|err| Error::Invalid(format!("map is not total on window {w}: {err}")))?;
            pairs.push((e, y));
        }
        images.push(pairs);
    }
    let trajectories = generators
        .iter()
        .map(|g| {
            let mut t = Trajectory { generator: g.to_string(), values: vec![], preimage_sizes: vec![], verdict: Verdict::Bounded, error: None };
            for pairs in &images {
                let pre: Vec<Elem> = pairs.iter().filter(|(_, y)| g.contains(y)).map(|(x, _)| x.clone()).collect();
                t.preimage_sizes.push(pre.len());
                match eval_target(&r.target, pre) {
                    Ok(v) => t.values.push(v.finite()),
                    Err(e) => {
                        t.error = Some(e.to_string());
                        t.verdict = Verdict::Error;
                        return t;
                    }
                }
            }
            let n = t.values.len();
            if n >= 2 && t.values[n - 1] != t.values[n - 2] {
                t.verdict = Verdict::Growing;
            }
            t
        })
        .collect();
    Ok(ReductionReport {
        source: r.source.clone(),
        target: r.target.to_string(),
        map: r.map.name().into(),
        windows: windows.to_vec(),
        observational: true,
        consistent,
        trajectories,
    })
}

pub fn identity(ideal: &IdealSpec) -> ReductionSpec {
    ReductionSpec { source: ideal.to_string(), target: ideal.clone(), map: KatetovMap::Identity }
}

pub fn constant(ideal: &IdealSpec, value: Elem) -> ReductionSpec {
    ReductionSpec { source: ideal.to_string(), target: ideal.clone(), map: KatetovMap::Constant(value) }
}

/// `conv ≤_K S_ω` through `U ↦ y_U`.
pub fn conv_to_somega(n: usize) -> ReductionSpec {
    ReductionSpec {
        source: "conv".into(),
        target: IdealSpec::Somega { depth: clopen::OMEGA_LIST_CAP, n },
        map: KatetovMap::YU,
    }
}

/// The embedding of `c` into the table as a map from `c`'s vertices into the
/// table's, checked against `target`. The table grows on demand.
pub fn coloring_reduction(c: &Coloring, t: &RadoTable, l: usize, target: IdealSpec) -> Result<ReductionSpec> {
    let mut table = t.clone();
    let f = hypergraph::embed_coloring_extending(c, &mut table)?;
    Ok(ReductionSpec {
        source: format!("rnkl:n={},k={},l={l}", t.n, t.k),
        target,
        map: KatetovMap::Embedding { f, coloring: c.clone(), table },
    })
}

/// For an embedding map: inside the image, a greedy maximal set of each color
/// class's stars, i.e. sets whose `n`-subsets all get one table color.
pub fn monochromatic_generators(map: &KatetovMap) -> Result<Vec<Generator>> {
    let KatetovMap::Embedding { f, table, .. } = map else {
        return Err(Error::Invalid("monochromatic generators need an embedding map".into()));
    };
    let mut image: Vec<u64> = f.clone();
    image.sort_unstable();
    let mut out = Vec::new();
    for color in 0..table.k as u8 {
        for start in 0..image.len() {
            let mut set: Vec<u64> = vec![image[start]];
            for &v in image.iter().skip(start + 1) {
                let mut cand = set.clone();
                cand.push(v);
                let ok = hypergraph::subsets(&cand, table.n)
                    .iter()
                    .filter(|t| t.contains(&v))
                    .all(|t| table.color(t).is_ok_and(|c| c == color));
                if ok {
                    set = cand;
                }
            }
            if set.len() >= table.n {
                out.push(Generator::Finite(set.into_iter().map(Elem::Nat).collect()));
            }
        }
    }
    out.sort_by_key(|g| g.to_string());
    out.dedup();
    Ok(out)
}

/// Seeded generator samples for a source ideal.
pub fn sample_generators(source: &IdealSpec, count: usize, seed: u64) -> Result<Vec<Generator>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(match source {
            IdealSpec::Conv { .. } => {
                let e = rng.random_range(2..6u32);
                let den = 1i64 << e;
                Generator::Ball { center: Rational::new(rng.random_range(1..den), den), radius: Rational::new(1, den * 2) }
            }
            IdealSpec::Ed | IdealSpec::EdFin => Generator::Column(rng.random_range(0..8)),
            IdealSpec::Somega { .. } => {
                let len = rng.random_range(1..4usize);
                Generator::Cylinder(BitString::from_value(rng.random_range(0..1u64 << len), len))
            }
            IdealSpec::Pc | IdealSpec::Edm { .. } | IdealSpec::Tc { .. } | IdealSpec::R { .. } => {
                let len = rng.random_range(1..3usize);
                Generator::Node(NodePath((0..len).map(|_| rng.random_range(0..3)).collect()))
            }
            IdealSpec::Gfc | IdealSpec::K => {
                let a = rng.random_range(0..6u64);
                let v: BTreeSet<Elem> = (0..3).map(|i| Elem::Pair(a + i, a + i + 1)).collect();
                Generator::Finite(v)
            }
        });
    }
    Ok(out)
}

/// Vertex images of the blocks `K_1, .., K_b`: pairwise disjoint, each a clique of
/// `X`. `K_1` has no edges, so its image is any unused vertex; larger blocks go first,
/// each onto the lexicographically least clique that still lets the rest fit.
pub fn k_uniform_witness(x: &[(u64, u64)], budget: usize) -> Result<Vec<Vec<u64>>> {
    let mut adj: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for &(a, b) in x {
        if a == b {
            return Err(Error::Invalid(format!("loop at {a}")));
        }
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    cap_check("k_uniform vertices", adj.len(), crate::ideals::K_VERTEX_CAP)?;
    let verts: Vec<u64> = adj.keys().copied().collect();
    let mut images: Vec<Vec<u64>> = vec![Vec::new(); budget];
    let mut used = BTreeSet::new();
    if !place(budget, &adj, &verts, &mut used, &mut images) {
        return Err(Error::NotFound(format!("no disjoint cliques for blocks K_1..K_{budget}")));
    }
    Ok(images)
}

fn place(size: usize, adj: &BTreeMap<u64, BTreeSet<u64>>, verts: &[u64], used: &mut BTreeSet<u64>, images: &mut [Vec<u64>]) -> bool {
    match size {
        0 => true,
        1 => {
            let v = (0..).find(|v| !used.contains(v)).expect("unbounded");
            images[0] = vec![v];
            true
        }
        _ => {
            let free: Vec<u64> = verts.iter().copied().filter(|v| !used.contains(v)).collect();
            let mut cur = Vec::new();
            cliques(size, adj, &free, 0, &mut cur, &mut |clique| {
                for &v in clique {
                    used.insert(v);
                }
                images[size - 1] = clique.to_vec();
                if place(size - 1, adj, verts, used, images) {
                    return true;
                }
                for v in clique {
                    used.remove(v);
                }
                false
            })
        }
    }
}

/// Cliques of the given size among `free`, in lexicographic order, until `visit` accepts one.
fn cliques(
    size: usize,
    adj: &BTreeMap<u64, BTreeSet<u64>>,
    free: &[u64],
    start: usize,
    cur: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) -> bool {
    if cur.len() == size {
        return visit(cur);
    }
    for i in start..free.len() {
        let v = free[i];
        if cur.iter().all(|u| adj[u].contains(&v)) {
            cur.push(v);
            if cliques(size, adj, free, i + 1, cur, visit) {
                return true;
            }
            cur.pop();
        }
    }
    false
}

/// Edges of the block `K_j` in the standard layout, on vertices `[j(j-1)/2, j(j+1)/2)`.
pub fn k_block_edges(j: u64) -> Vec<(u64, u64)> {
    let lo = j * j.saturating_sub(1) / 2;
    let verts: Vec<u64> = (lo..lo + j).collect();
    hypergraph::subsets(&verts, 2).into_iter().map(|e| (e[0], e[1])).collect()
}
