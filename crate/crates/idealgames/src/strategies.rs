//! The winning strategies as players, the adversaries used against them, the
//! bigness heuristic, and the registry that rebuilds players from transcript ids.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clopen::{self, ClopenSet};
use crate::error::{Error, Result};
use crate::game::{self, Action, GameKind, Move, Pending, Player, Strategy, Transcript, View};
use crate::ground::{Elem, FiniteSubset};
use crate::ideals::{self, parse_params, take_param, no_more_params, GrowthFunction, IdealSpec};
use crate::tree::{self, NodePath};

pub const STRATEGY_NAMES: &[&str] = &[
    "ed-cutter",
    "rado-cutter",
    "pc-chooser",
    "tb-chooser",
    "nontall-chooser",
    "fsigma-chooser",
    "conv-cutter",
    "somega-cutter",
    "g3-somega-chooser",
    "random-cutter",
    "random-chooser",
    "bisect-cutter",
];

/// Finite stand-in for "big below s".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BignessParams {
    /// Only members below `window` count.
    pub window: u64,
    pub depth: usize,
    pub threshold: usize,
}

impl Default for BignessParams {
    fn default() -> Self {
        BignessParams { window: u64::MAX, depth: 2, threshold: 1 }
    }
}

/// Children `s⌢n` holding at least `threshold` members of `piece`, counted
/// level by level down to `depth`: the count at `s`, capped by the best
/// score among its qualifying children.
pub fn big_below_score(piece: &[u64], s: &NodePath, p: &BignessParams) -> usize {
    let members: Vec<u64> = piece.iter().copied().filter(|&n| n < p.window && tree::in_node(n, s)).collect();
    score_rec(&members, s, p.depth.max(1), p.threshold.max(1))
}

fn score_rec(members: &[u64], s: &NodePath, depth: usize, threshold: usize) -> usize {
    let mut children: std::collections::BTreeMap<u64, Vec<u64>> = std::collections::BTreeMap::new();
    for &n in members {
        let k = tree::branch_prefix(n, s.len() + 1).0[s.len()];
        children.entry(k).or_default().push(n);
    }
    let qualifying: Vec<(u64, Vec<u64>)> = children.into_iter().filter(|(_, v)| v.len() >= threshold).collect();
    let count = qualifying.len();
    if depth <= 1 || count == 0 {
        return count;
    }
    let best = qualifying.iter().map(|(k, v)| score_rec(v, &s.child(*k), depth - 1, threshold)).max().unwrap_or(0);
    count.min(best)
}

fn rng(seed: u64, round: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(round as u64);
    r
}

fn cut_sides<'a>(view: &'a View) -> Result<(&'a [Elem], &'a [Elem], Option<u8>)> {
    match view.pending {
        Some(Pending::Cut { left, right, tail }) => Ok((left, right, *tail)),
        _ => Err(Error::Internal("expected a pending cut".into())),
    }
}

fn ideal_play<'a>(view: &'a View) -> Result<&'a [Elem]> {
    match view.pending {
        Some(Pending::Ideal { set }) => Ok(set),
        _ => Err(Error::Internal("expected a pending ideal play".into())),
    }
}

fn nats(v: &[Elem]) -> Vec<u64> {
    v.iter().filter_map(Elem::as_nat).collect()
}

fn fresh<'a>(view: &'a View, side: &'a [Elem]) -> impl Iterator<Item = &'a Elem> + 'a {
    side.iter().filter(move |e| !view.chosen.contains(e))
}

fn grow_or_resign(view: &View) -> Action {
    if view.can_grow {
        Action::NeedMoreWindow
    } else {
        Action::Resign
    }
}

/// Player II's choices so far, in order: `(side, elements)`.
fn choices(view: &View) -> Vec<(u8, Vec<Elem>)> {
    view.history
        .iter()
        .filter_map(|r| match &r.mv {
            Move::Choose { side, elem } => Some((*side, vec![elem.clone()])),
            Move::ChooseBlock { side, block } => Some((*side, block.clone())),
            _ => None,
        })
        .collect()
}

fn wrong_game(name: &str, game: GameKind) -> Error {
    Error::Invalid(format!("{name} does not play {game}"))
}

fn tailed(view: &View, side: u8) -> Option<u8> {
    view.has_tail.then_some(side)
}

fn split_by(arena: &[Elem], mut left: impl FnMut(&Elem) -> bool) -> (Vec<Elem>, Vec<Elem>) {
    arena.iter().cloned().partition(|e| left(e))
}

/// Uniformly random split, the tail sent to a random side. In `G3` a uniformly random subset.
pub struct RandomCutter {
    pub seed: u64,
}

impl Strategy for RandomCutter {
    fn id(&self) -> String {
        "random-cutter".into()
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn act(&self, view: &View) -> Result<Action> {
        let mut r = rng(self.seed, view.round);
        match view.game {
            GameKind::G1 | GameKind::Gfin => {
                let (left, right) = split_by(view.arena, |_| r.random_bool(0.5));
                let tail = tailed(view, r.random_range(0..2));
                Ok(Action::Play(Move::Cut { left, right, tail }))
            }
            GameKind::G3 => {
                let set = view.window_elems.iter().filter(|_| r.random_bool(0.5)).cloned().collect();
                Ok(Action::Play(Move::IdealPlay { set }))
            }
        }
    }
}

/// Lower half of the arena against the upper half, tail to the upper half.
pub struct BisectCutter;

impl Strategy for BisectCutter {
    fn id(&self) -> String {
        "bisect-cutter".into()
    }

    fn act(&self, view: &View) -> Result<Action> {
        match view.game {
            GameKind::G1 | GameKind::Gfin => {
                let half = view.arena.len() / 2;
                Ok(Action::Play(Move::Cut {
                    left: view.arena[..half].to_vec(),
                    right: view.arena[half..].to_vec(),
                    tail: tailed(view, 1),
                }))
            }
            GameKind::G3 => {
                let half = view.window_elems.len() / 2;
                Ok(Action::Play(Move::IdealPlay { set: view.window_elems[..half].to_vec() }))
            }
        }
    }
}

/// Uniform side among those that can serve a move, then a uniform element.
pub struct RandomChooser {
    pub seed: u64,
}

impl Strategy for RandomChooser {
    fn id(&self) -> String {
        "random-chooser".into()
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn act(&self, view: &View) -> Result<Action> {
        let mut r = rng(self.seed, view.round);
        match view.game {
            GameKind::G1 | GameKind::Gfin => {
                let (left, right, _) = cut_sides(view)?;
                let options: Vec<(u8, Vec<&Elem>)> = [(0u8, left), (1u8, right)]
                    .into_iter()
                    .map(|(s, side)| {
                        let pool: Vec<&Elem> =
                            if view.game == GameKind::G1 { fresh(view, side).collect() } else { side.iter().collect() };
                        (s, pool)
                    })
                    .filter(|(_, pool)| !pool.is_empty())
                    .collect();
                if options.is_empty() {
                    return Ok(Action::NeedMoreWindow);
                }
                let (side, pool) = &options[r.random_range(0..options.len())];
                let elem = pool[r.random_range(0..pool.len())].clone();
                Ok(Action::Play(if view.game == GameKind::G1 {
                    Move::Choose { side: *side, elem }
                } else {
                    Move::ChooseBlock { side: *side, block: vec![elem] }
                }))
            }
            GameKind::G3 => {
                let set = ideal_play(view)?;
                let pool: Vec<&Elem> = view.window_elems.iter().filter(|e| set.binary_search(e).is_err()).collect();
                if pool.is_empty() {
                    return Ok(grow_or_resign(view));
                }
                Ok(Action::Play(Move::PointPlay { elem: pool[r.random_range(0..pool.len())].clone() }))
            }
        }
    }
}

/// Player I in `G1(ED)`: with Player II's rows `n_0 < n_1 < ..` and
/// `n_{-2} = -1`, `n_{-1} = 0`, round `i` offers the rows `(n_{i-2}, n_{i-1}]`
/// against the rows above `n_{i-1}`. A choice of the finite block (side 0)
/// loses for Player II; after it the cutter keeps offering the whole arena.
pub struct EdCutter;

impl EdCutter {
    /// Whether Player II has taken the finite row block at some round.
    pub fn flagged(t: &Transcript) -> bool {
        t.records.iter().any(|r| matches!(r.mv, Move::Choose { side: 0, .. }))
    }
}

impl Strategy for EdCutter {
    fn id(&self) -> String {
        "ed-cutter".into()
    }

    fn act(&self, view: &View) -> Result<Action> {
        if view.game != GameKind::G1 {
            return Err(wrong_game("ed-cutter", view.game));
        }
        let picks = choices(view);
        if picks.iter().any(|(side, _)| *side == 0) {
            return Ok(Action::Play(Move::Cut { left: view.arena.to_vec(), right: vec![], tail: None }));
        }
        let mut rows: Vec<i64> = vec![-1, 0];
        rows.extend(picks.iter().filter_map(|(_, e)| e[0].as_pair()).map(|(n, _)| n as i64));
        let (lo, hi) = (rows[rows.len() - 2], rows[rows.len() - 1]);
        let row = |e: &Elem| e.as_pair().map_or(-1, |(n, _)| n as i64);
        let (left, right) = split_by(view.arena, |e| row(e) <= hi);
        if left.iter().any(|e| row(e) <= lo) {
            return Err(Error::Internal("row block below the previous pick".into()));
        }
        if !right.iter().any(|e| !view.chosen.contains(e)) {
            return Ok(Action::NeedMoreWindow);
        }
        Ok(Action::Play(Move::Cut { left, right, tail: None }))
    }
}

/// Player I in `G1(R)`: first the whole arena against nothing, then split by
/// adjacency to Player II's last point (the point itself goes with its non-neighbours).
pub struct RadoCutter;

impl Strategy for RadoCutter {
    fn id(&self) -> String {
        "rado-cutter".into()
    }

    fn act(&self, view: &View) -> Result<Action> {
        if view.game != GameKind::G1 {
            return Err(wrong_game("rado-cutter", view.game));
        }
        let Some(last) = choices(view).last().and_then(|(_, e)| e[0].as_nat()) else {
            return Ok(Action::Play(Move::Cut { left: view.arena.to_vec(), right: vec![], tail: tailed(view, 0) }));
        };
        let (left, right) = split_by(view.arena, |e| {
            let x = e.as_nat().expect("naturals arena");
            x == last || !ideals::rado_edge(x, last).expect("distinct")
        });
        Ok(Action::Play(Move::Cut { left, right, tail: None }))
    }
}

/// Level of round `r` under quotas `q(0), q(1), ..`, and the round the level started.
fn stage_of(round: usize, quota: impl Fn(usize) -> Result<usize>) -> Result<(usize, usize)> {
    let (mut level, mut start) = (0, 0);
    loop {
        let q = quota(level)?;
        if round < start + q {
            return Ok((level, start));
        }
        start += q;
        level += 1;
    }
}

/// Shared skeleton of the level-by-level choosers: during stage `k` every pick
/// lands in a level-`node_depth(k)` node not yet used in that stage.
fn level_chooser(
    view: &View,
    quota: impl Fn(usize) -> Result<usize>,
    node_depth: impl Fn(usize) -> usize,
    score: impl Fn(&[u64], usize) -> usize,
) -> Result<Action> {
    if view.game != GameKind::G1 {
        return Err(Error::Invalid(format!("level choosers play g1, not {}", view.game)));
    }
    let (level, start) = stage_of(view.round, quota)?;
    let depth = node_depth(level);
    let picks = choices(view);
    let used: BTreeSet<NodePath> = picks[start.min(picks.len())..]
        .iter()
        .filter_map(|(_, e)| e[0].as_nat())
        .map(|n| tree::branch_prefix(n, depth))
        .collect();
    let (left, right, tail) = cut_sides(view)?;
    let candidate = |side: &[Elem]| -> Option<Elem> {
        fresh(view, side).find(|e| !used.contains(&tree::branch_prefix(e.as_nat().expect("naturals"), depth))).cloned()
    };
    let available = |side: &[Elem]| -> usize {
        fresh(view, side)
            .map(|e| tree::branch_prefix(e.as_nat().expect("naturals"), depth))
            .filter(|s| !used.contains(s))
            .collect::<BTreeSet<_>>()
            .len()
    };
    let side = match tail {
        Some(t) => t,
        None => {
            let key = |s: &[Elem]| (score(&nats(s), level), available(s));
            if key(right) > key(left) {
                1
            } else {
                0
            }
        }
    };
    let chosen_side = if side == 0 { left } else { right };
    match candidate(chosen_side) {
        Some(elem) => Ok(Action::Play(Move::Choose { side, elem })),
        None => Ok(grow_or_resign(view)),
    }
}

/// Player II in `G1(PC)`: `(k+1)!` picks in pairwise distinct level-`k` nodes, level after level.
pub struct PcChooser {
    pub params: BignessParams,
}

impl PcChooser {
    pub fn quota(level: usize) -> Result<usize> {
        (1..=level + 1).try_fold(1usize, |a, i| a.checked_mul(i)).ok_or_else(|| Error::Overflow("pc quota".into()))
    }
}

impl Strategy for PcChooser {
    fn id(&self) -> String {
        let d = BignessParams::default();
        if self.params.depth == d.depth && self.params.threshold == d.threshold {
            "pc-chooser".into()
        } else {
            format!("pc-chooser:depth={},theta={}", self.params.depth, self.params.threshold)
        }
    }

    fn act(&self, view: &View) -> Result<Action> {
        let p = BignessParams { window: view.window, ..self.params };
        level_chooser(view, PcChooser::quota, |k| k, |piece, _| big_below_score(piece, &NodePath::root(), &p))
    }
}

/// Player II for `TB`: stage `j` makes `(j+1)·f(j)` picks in distinct depth-`(j+1)` nodes;
/// without a tail the side with more children holding `ceil(g/2^(round+1))` members wins.
pub struct TbChooser {
    pub f: GrowthFunction,
}

impl Strategy for TbChooser {
    fn id(&self) -> String {
        format!("tb-chooser:f={}", self.f)
    }

    fn act(&self, view: &View) -> Result<Action> {
        let f = &self.f;
        let round = view.round;
        let quota = |j: usize| -> Result<usize> { (j + 1).checked_mul(f.eval(j)? as usize).ok_or_else(|| Error::Overflow("tb quota".into())) };
        let score = |piece: &[u64], level: usize| -> usize {
            let g = f.tb_big(level).unwrap_or(u64::MAX);
            let theta = if round + 1 >= 64 { 1 } else { g.div_ceil(1u64 << (round + 1)).max(1) } as usize;
            big_below_score(piece, &NodePath::root(), &BignessParams { window: view.window, depth: 1, threshold: theta })
        };
        level_chooser(view, quota, |j| j + 1, score)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Evens,
    Multiples(u64),
    Node(NodePath),
    Set(Vec<u64>),
}

impl Witness {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            Witness::Evens => n.is_multiple_of(2),
            Witness::Multiples(k) => *k != 0 && n.is_multiple_of(*k),
            Witness::Node(s) => tree::in_node(n, s),
            Witness::Set(v) => v.binary_search(&n).is_ok(),
        }
    }

    fn param(&self) -> String {
        match self {
            Witness::Evens => "evens".into(),
            Witness::Multiples(k) => format!("mult{k}"),
            Witness::Node(s) => format!("node{}", s.0.iter().map(u64::to_string).collect::<Vec<_>>().join(".")),
            Witness::Set(v) => format!("set{}", v.iter().map(u64::to_string).collect::<Vec<_>>().join(".")),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        let list = |t: &str| -> Result<Vec<u64>> {
            if t.is_empty() {
                return Ok(vec![]);
            }
            t.split('.').map(|x| x.parse().map_err(|_| Error::Parse(format!("bad witness {s:?}")))).collect()
        };
        if s == "evens" {
            Ok(Witness::Evens)
        } else if let Some(k) = s.strip_prefix("mult") {
            Ok(Witness::Multiples(k.parse().map_err(|_| Error::Parse(format!("bad witness {s:?}")))?))
        } else if let Some(t) = s.strip_prefix("node") {
            Ok(Witness::Node(NodePath(list(t)?)))
        } else if let Some(t) = s.strip_prefix("set") {
            let mut v = list(t)?;
            v.sort_unstable();
            v.dedup();
            Ok(Witness::Set(v))
        } else {
            Err(Error::Parse(format!("bad witness {s:?}")))
        }
    }
}

/// Player II against a non-tall ideal: follow the side meeting the witness more.
pub struct NontallChooser {
    pub witness: Witness,
}

impl Strategy for NontallChooser {
    fn id(&self) -> String {
        format!("nontall-chooser:witness={}", self.witness.param())
    }

    fn act(&self, view: &View) -> Result<Action> {
        if view.game != GameKind::G1 {
            return Err(wrong_game("nontall-chooser", view.game));
        }
        let (left, right, tail) = cut_sides(view)?;
        let hits = |side: &[Elem]| -> Vec<Elem> {
            fresh(view, side).filter(|e| e.as_nat().is_some_and(|n| self.witness.contains(n))).cloned().collect()
        };
        let (l, r) = (hits(left), hits(right));
        let prefer_right = r.len() > l.len() || (r.len() == l.len() && tail == Some(1));
        let (side, pool) = if prefer_right { (1, r) } else { (0, l) };
        match pool.into_iter().next() {
            Some(elem) => Ok(Action::Play(Move::Choose { side, elem })),
            None => Ok(grow_or_resign(view)),
        }
    }
}

/// Player II in `Gfin` for a graded ideal: stay on the tail (else the side of larger
/// grading) and take the shortest initial segment whose grading reaches `round + 1`.
pub struct FsigmaChooser {
    pub ideal: IdealSpec,
}

impl FsigmaChooser {
    fn phi(&self, v: &[Elem]) -> Option<u64> {
        let set = FiniteSubset::new(self.ideal.ground(), v.iter().cloned()).ok()?;
        self.ideal.eval(&set).ok()?.finite()
    }
}

impl Strategy for FsigmaChooser {
    fn id(&self) -> String {
        format!("fsigma-chooser:phi={}", self.ideal.to_string().replace(':', "/").replace(',', ";"))
    }

    fn act(&self, view: &View) -> Result<Action> {
        if view.game != GameKind::Gfin {
            return Err(wrong_game("fsigma-chooser", view.game));
        }
        let (left, right, tail) = cut_sides(view)?;
        let side = match tail {
            Some(t) => t,
            None => {
                let (a, b) = (self.phi(left), self.phi(right));
                let key = |v: Option<u64>, s: &[Elem]| (v.unwrap_or(0), s.len());
                if key(b, right) > key(a, left) {
                    1
                } else {
                    0
                }
            }
        };
        let pool = if side == 0 { left } else { right };
        let need = view.round as u64 + 1;
        let reaches = |len: usize| self.phi(&pool[..len]).is_some_and(|v| v >= need);
        if !reaches(pool.len()) {
            return Ok(grow_or_resign(view));
        }
        // shortest reaching prefix; the grading is monotone in the prefix
        let (mut lo, mut hi) = (0, pool.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if reaches(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Action::Play(Move::ChooseBlock { side, block: pool[..lo].to_vec() }))
    }
}

/// Player I in `Gfin(conv)`: halve the current interval `(a, b]` at its midpoint.
pub struct ConvCutter;

impl ConvCutter {
    /// The interval Player II has been confined to after the given choices.
    pub fn interval(sides: &[u8]) -> (crate::Rational, crate::Rational) {
        let (mut a, mut b) = (crate::Rational::new(0, 1), crate::Rational::new(1, 1));
        for &s in sides {
            let mid = (a + b) / 2;
            if s == 0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        (a, b)
    }
}

impl Strategy for ConvCutter {
    fn id(&self) -> String {
        "conv-cutter".into()
    }

    fn act(&self, view: &View) -> Result<Action> {
        if view.game != GameKind::Gfin {
            return Err(wrong_game("conv-cutter", view.game));
        }
        let sides: Vec<u8> = choices(view).iter().map(|(s, _)| *s).collect();
        let (a, b) = ConvCutter::interval(&sides);
        let mid = (a + b) / 2;
        let (left, right) = split_by(view.arena, |e| e.as_rat().is_some_and(|q| q <= mid));
        Ok(Action::Play(Move::Cut { left, right, tail: None }))
    }
}

/// Player I in `Gfin(S_ω)`: round `r` splits by bit `r` of `x_U`.
pub struct SomegaCutter;

impl Strategy for SomegaCutter {
    fn id(&self) -> String {
        "somega-cutter".into()
    }

    fn act(&self, view: &View) -> Result<Action> {
        if view.game != GameKind::Gfin {
            return Err(wrong_game("somega-cutter", view.game));
        }
        let r = view.round;
        let bit = |e: &Elem| -> bool {
            let u = e.as_clopen().expect("clopen arena");
            clopen::x_u(u, r + 1).expect("depth within range").bit(r)
        };
        let (left, right) = split_by(view.arena, |e| !bit(e));
        Ok(Action::Play(Move::Cut { left, right, tail: None }))
    }
}

/// Player II in `G3` over clopen sets: dodge `I_k` with a member disjoint from
/// the `k`-th clopen set of measure `2^-(n+1)` at depth `<= m`.
pub struct G3SomegaChooser {
    pub n: usize,
    pub m: usize,
}

impl G3SomegaChooser {
    pub fn references(&self) -> Result<Vec<ClopenSet>> {
        clopen::enum_measure(self.n + 1, self.m)
    }

    pub fn reference(&self, round: usize) -> Result<ClopenSet> {
        let refs = self.references()?;
        if refs.is_empty() {
            return Err(Error::Invalid(format!("no clopen set of measure 2^-{} at depth {}", self.n + 1, self.m)));
        }
        Ok(refs[round % refs.len()].clone())
    }
}

impl Strategy for G3SomegaChooser {
    fn id(&self) -> String {
        format!("g3-somega-chooser:n={},m={}", self.n, self.m)
    }

    fn act(&self, view: &View) -> Result<Action> {
        if view.game != GameKind::G3 {
            return Err(wrong_game("g3-somega-chooser", view.game));
        }
        let set = ideal_play(view)?;
        let u = self.reference(view.round)?;
        let pick = view.window_elems.iter().find(|e| {
            set.binary_search(e).is_err() && e.as_clopen().is_some_and(|v| !v.meets(&u))
        });
        Ok(match pick {
            Some(e) => Action::Play(Move::PointPlay { elem: e.clone() }),
            None => Action::Resign,
        })
    }
}

/// Builds a player from its registry id `name[:key=value,...]`.
pub fn build(id: &str, seed: u64) -> Result<Box<dyn Strategy>> {
    let (name, mut p) = parse_params(id)?;
    let s: Box<dyn Strategy> = match name.as_str() {
        "ed-cutter" => Box::new(EdCutter),
        "rado-cutter" => Box::new(RadoCutter),
        "pc-chooser" => {
            let d = BignessParams::default();
            Box::new(PcChooser {
                params: BignessParams {
                    window: u64::MAX,
                    depth: take_param(&mut p, "depth")?.unwrap_or(d.depth),
                    threshold: take_param(&mut p, "theta")?.unwrap_or(d.threshold),
                },
            })
        }
        "tb-chooser" => Box::new(TbChooser { f: take_param(&mut p, "f")?.unwrap_or_else(|| GrowthFunction::constant(1).expect("valid")) }),
        "nontall-chooser" => {
            let w = take_param::<String>(&mut p, "witness")?.unwrap_or_else(|| "evens".into());
            Box::new(NontallChooser { witness: Witness::parse(&w)? })
        }
        "fsigma-chooser" => {
            let phi = take_param::<String>(&mut p, "phi")?.unwrap_or_else(|| "ed".into());
            Box::new(FsigmaChooser { ideal: phi.replace('/', ":").replace(';', ",").parse()? })
        }
        "conv-cutter" => Box::new(ConvCutter),
        "somega-cutter" => Box::new(SomegaCutter),
        "g3-somega-chooser" => Box::new(G3SomegaChooser {
            n: take_param(&mut p, "n")?.unwrap_or(1),
            m: take_param(&mut p, "m")?.unwrap_or(3),
        }),
        "random-cutter" => Box::new(RandomCutter { seed }),
        "random-chooser" => Box::new(RandomChooser { seed }),
        "bisect-cutter" => Box::new(BisectCutter),
        other => return Err(Error::NotFound(format!("strategy {other:?}"))),
    };
    no_more_params(&name, &p)?;
    Ok(s)
}

/// Plays again from the header alone: same strategies, seeds, rounds and policy.
pub fn replay(t: &Transcript) -> Result<Transcript> {
    let h = &t.header;
    let first = build(&h.strategies[0], h.seeds[0])?;
    let second = build(&h.strategies[1], h.seeds[1])?;
    game::play(h.game, &h.ideal, first.as_ref(), second.as_ref(), h.rounds, h.policy)
}

/// Whether a persisted transcript is reproduced byte for byte.
pub fn replays_identically(jsonl: &str) -> Result<bool> {
    let t = Transcript::from_jsonl(jsonl)?;
    Ok(replay(&t)?.to_jsonl() == jsonl)
}

/// Which side the given player is on for a registry id: cutters and ideal players are I.
pub fn role_of(id: &str) -> Result<Player> {
    let (name, _) = parse_params(id)?;
    match name.as_str() {
        "ed-cutter" | "rado-cutter" | "conv-cutter" | "somega-cutter" | "random-cutter" | "bisect-cutter" => Ok(Player::I),
        "pc-chooser" | "tb-chooser" | "nontall-chooser" | "fsigma-chooser" | "g3-somega-chooser" | "random-chooser" => Ok(Player::II),
        other => Err(Error::NotFound(format!("strategy {other:?}"))),
    }
}
