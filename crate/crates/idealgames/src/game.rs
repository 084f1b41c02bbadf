//! Referee for the cut-and-choose game `G1`, its block variant `Gfin`, and the
//! dodging game `G3`, with line-delimited transcripts.
//!
//! Plays happen inside a finite window of the ground set. A cut may name a
//! `tail` side: every element beyond the window belongs to that side. While
//! Player II keeps choosing the tail side the arena still contains everything
//! past the window, so the window can grow in place. Otherwise a request for
//! more room restarts the play at a larger window, up to the policy cap.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{Elem, FiniteSubset, Ground};
use crate::ideals::{IdealSpec, SubmeasureValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    G1,
    Gfin,
    G3,
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::G1 => "g1",
            GameKind::Gfin => "gfin",
            GameKind::G3 => "g3",
        })
    }
}

impl std::str::FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g1" => Ok(GameKind::G1),
            "gfin" => Ok(GameKind::Gfin),
            "g3" => Ok(GameKind::G3),
            other => Err(Error::Parse(format!("unknown game {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::I => 0,
            Player::II => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::II => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Move {
    Cut { left: Vec<Elem>, right: Vec<Elem>, tail: Option<u8> },
    Choose { side: u8, elem: Elem },
    ChooseBlock { side: u8, block: Vec<Elem> },
    IdealPlay { set: Vec<Elem> },
    PointPlay { elem: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub seq: usize,
    pub player: Player,
    #[serde(flatten)]
    pub mv: Move,
    pub window: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub seq: usize,
    pub player: Player,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "move {} by {}: {}", self.seq, self.player, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Status {
    Running,
    Completed,
    Resigned { player: Player },
    Illegal { violation: Violation },
    /// `player` asked for room the window cap or the arena could not give.
    Exhausted { player: Player },
}

impl Status {
    pub fn is_over(&self) -> bool {
        !matches!(self, Status::Running)
    }

    pub fn loser(&self) -> Option<Player> {
        match self {
            Status::Resigned { player } | Status::Exhausted { player } => Some(*player),
            Status::Illegal { violation } => Some(violation.player),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPolicy {
    pub initial: u64,
    pub cap: u64,
}

impl WindowPolicy {
    pub fn default_for(ground: &Ground) -> Self {
        let cap = match ground {
            Ground::Naturals => 1 << 20,
            Ground::Pairs | Ground::LowerTriangle | Ground::EdgeSet => 1 << 8,
            Ground::Rationals01 => 24,
            Ground::Omega { .. } => 0,
        };
        WindowPolicy { initial: ground.default_window(), cap }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub game: GameKind,
    pub ideal: IdealSpec,
    pub strategies: [String; 2],
    pub seeds: [u64; 2],
    pub rounds: usize,
    pub policy: WindowPolicy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub header: Header,
    pub records: Vec<MoveRecord>,
    pub status: Status,
}

#[derive(Serialize, Deserialize)]
struct Trailer {
    status: Status,
}

impl Transcript {
    /// Header line, one line per move, then a trailer line with the final status.
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&Trailer { status: self.status.clone() }).expect("status serializes"));
        out.push('\n');
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.len() < 2 {
            return Err(Error::Parse("transcript needs a header and a trailer".into()));
        }
        let parse_err = |e: serde_json::Error| Error::Parse(e.to_string());
        let header: Header = serde_json::from_str(lines[0]).map_err(parse_err)?;
        let records = lines[1..lines.len() - 1]
            .iter()
            .map(|l| serde_json::from_str(l).map_err(parse_err))
            .collect::<Result<Vec<MoveRecord>>>()?;
        let trailer: Trailer = serde_json::from_str(lines[lines.len() - 1]).map_err(parse_err)?;
        Ok(Transcript { header, records, status: trailer.status })
    }

    pub fn ground(&self) -> Ground {
        self.header.ideal.ground()
    }

    /// Elements Player II added to the outcome, one entry per completed round.
    pub fn outcome_by_round(&self) -> Vec<Vec<Elem>> {
        self.records
            .iter()
            .filter_map(|r| match &r.mv {
                Move::Choose { elem, .. } | Move::PointPlay { elem } => Some(vec![elem.clone()]),
                Move::ChooseBlock { block, .. } => Some(block.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn outcome(&self) -> Vec<Elem> {
        let set: BTreeSet<Elem> = self.outcome_by_round().into_iter().flatten().collect();
        set.into_iter().collect()
    }

    pub fn rounds_played(&self) -> usize {
        self.records.iter().filter(|r| r.player == Player::II).count()
    }
}

/// What Player II currently faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pending {
    Cut { left: Vec<Elem>, right: Vec<Elem>, tail: Option<u8> },
    Ideal { set: Vec<Elem> },
}

/// Result of asking the engine for more window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    InPlace,
    Restart(u64),
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct GameState {
    pub game: GameKind,
    pub ground: Ground,
    pub window: u64,
    window_elems: Vec<Elem>,
    arena: Vec<Elem>,
    has_tail: bool,
    in_place_ok: bool,
    chosen: BTreeSet<Elem>,
    pending: Option<Pending>,
    records: Vec<MoveRecord>,
    rounds_done: usize,
}

impl GameState {
    pub fn new(game: GameKind, ground: Ground, window: u64) -> Result<Self> {
        let window_elems = ground.window(window)?;
        Ok(GameState {
            game,
            ground,
            window,
            arena: window_elems.clone(),
            window_elems,
            has_tail: ground.has_tail(),
            in_place_ok: true,
            chosen: BTreeSet::new(),
            pending: None,
            records: Vec::new(),
            rounds_done: 0,
        })
    }

    pub fn to_move(&self) -> Player {
        if self.pending.is_some() {
            Player::II
        } else {
            Player::I
        }
    }

    pub fn arena(&self) -> &[Elem] {
        &self.arena
    }

    pub fn window_elems(&self) -> &[Elem] {
        &self.window_elems
    }

    pub fn pending(&self) -> Option<&Pending> {
        self.pending.as_ref()
    }

    pub fn records(&self) -> &[MoveRecord] {
        &self.records
    }

    pub fn chosen(&self) -> &BTreeSet<Elem> {
        &self.chosen
    }

    pub fn has_tail(&self) -> bool {
        self.has_tail
    }

    pub fn rounds_done(&self) -> usize {
        self.rounds_done
    }

    /// Whether some element of the arena has not been chosen yet.
    pub fn has_fresh(&self) -> bool {
        self.arena.iter().any(|e| !self.chosen.contains(e))
    }

    /// Whether new elements have a place to go: the arena has the tail and
    /// a pending cut, if any, says which side gets it.
    fn tail_open(&self) -> bool {
        self.has_tail && !matches!(self.pending, Some(Pending::Cut { tail: None, .. }))
    }

    /// How the engine would satisfy a request for more window.
    pub fn growth_option(&self, cap: u64) -> Growth {
        match self.ground.grow(self.window).filter(|&w| w <= cap) {
            None => Growth::Exhausted,
            Some(_) if self.tail_open() => Growth::InPlace,
            Some(w) if !self.in_place_ok || self.has_tail => Growth::Restart(w),
            Some(_) => Growth::Exhausted,
        }
    }

    /// Grows the window one step, adding the new elements to the arena and to
    /// the tail side of a pending cut. Only valid while the arena has the tail.
    pub fn grow_in_place(&mut self) -> Result<()> {
        if !self.tail_open() {
            return Err(Error::Invalid("arena has no tail; it cannot grow in place".into()));
        }
        let w = self.ground.grow(self.window).ok_or_else(|| Error::Invalid("ground cannot grow".into()))?;
        let next = self.ground.window(w)?;
        let old: BTreeSet<&Elem> = self.window_elems.iter().collect();
        let fresh: Vec<Elem> = next.iter().filter(|e| !old.contains(e)).cloned().collect();
        self.arena.extend(fresh.iter().cloned());
        self.arena.sort();
        match &mut self.pending {
            Some(Pending::Cut { left, right, tail }) => {
                let side = if *tail == Some(0) { left } else { right };
                side.extend(fresh);
                side.sort();
            }
            Some(Pending::Ideal { .. }) | None => {}
        }
        self.window = w;
        self.window_elems = next;
        Ok(())
    }

    fn violation(&self, player: Player, reason: impl Into<String>) -> Violation {
        Violation { seq: self.records.len(), player, reason: reason.into() }
    }

    /// Checks `mv` and applies it. On a violation the state is unchanged.
    pub fn apply(&mut self, player: Player, mv: Move) -> Result<&MoveRecord, Violation> {
        if player != self.to_move() {
            return Err(self.violation(player, format!("it is player {}'s turn", self.to_move())));
        }
        match (self.game, player, &mv, &self.pending) {
            (GameKind::G1 | GameKind::Gfin, Player::I, Move::Cut { left, right, tail }, None) => {
                self.check_cut(left, right, *tail)?;
                self.pending = Some(Pending::Cut { left: left.clone(), right: right.clone(), tail: *tail });
            }
            (GameKind::G1, Player::II, Move::Choose { side, elem }, Some(Pending::Cut { left, right, tail })) => {
                let chosen_side = match side {
                    0 => left,
                    1 => right,
                    _ => return Err(self.violation(player, format!("side {side} is not 0 or 1"))),
                };
                if chosen_side.binary_search(elem).is_err() {
                    return Err(self.violation(player, format!("{elem} is not in side {side}")));
                }
                if self.chosen.contains(elem) {
                    return Err(self.violation(player, format!("{elem} was already chosen")));
                }
                let (arena, tail) = (chosen_side.clone(), *tail);
                self.chosen.insert(elem.clone());
                self.take_side(arena, *side, tail);
            }
            (GameKind::Gfin, Player::II, Move::ChooseBlock { side, block }, Some(Pending::Cut { left, right, tail })) => {
                let chosen_side = match side {
                    0 => left,
                    1 => right,
                    _ => return Err(self.violation(player, format!("side {side} is not 0 or 1"))),
                };
                if let Some(bad) = block.iter().find(|e| chosen_side.binary_search(e).is_err()) {
                    return Err(self.violation(player, format!("block element {bad} is not in side {side}")));
                }
                let (arena, tail) = (chosen_side.clone(), *tail);
                self.chosen.extend(block.iter().cloned());
                self.take_side(arena, *side, tail);
            }
            (GameKind::G3, Player::I, Move::IdealPlay { set }, None) => {
                if let Some(bad) = set.iter().find(|e| self.window_elems.binary_search(e).is_err()) {
                    return Err(self.violation(player, format!("{bad} is outside the window")));
                }
                if !is_sorted_unique(set) {
                    return Err(self.violation(player, "ideal play is not sorted without repeats"));
                }
                self.pending = Some(Pending::Ideal { set: set.clone() });
            }
            (GameKind::G3, Player::II, Move::PointPlay { elem }, Some(Pending::Ideal { set })) => {
                if self.window_elems.binary_search(elem).is_err() {
                    return Err(self.violation(player, format!("{elem} is outside the window")));
                }
                if set.binary_search(elem).is_ok() {
                    return Err(self.violation(player, format!("{elem} lies in player I's set")));
                }
                self.chosen.insert(elem.clone());
                self.pending = None;
                self.rounds_done += 1;
            }
            _ => return Err(self.violation(player, format!("move kind not allowed here in {}", self.game))),
        }
        let seq = self.records.len();
        self.records.push(MoveRecord { seq, player, mv, window: self.window });
        Ok(self.records.last().expect("just pushed"))
    }

    fn check_cut(&self, left: &[Elem], right: &[Elem], tail: Option<u8>) -> Result<(), Violation> {
        let p = Player::I;
        if !is_sorted_unique(left) || !is_sorted_unique(right) {
            return Err(self.violation(p, "cut sides must be sorted without repeats"));
        }
        if let Some(e) = left.iter().find(|e| right.binary_search(e).is_ok()) {
            return Err(self.violation(p, format!("cut sides overlap at {e}")));
        }
        if left.len() + right.len() != self.arena.len()
            || left.iter().chain(right).any(|e| self.arena.binary_search(e).is_err())
        {
            return Err(self.violation(p, "cut sides do not make up the arena"));
        }
        match tail {
            None => {}
            Some(t) if t > 1 => return Err(self.violation(p, format!("tail side {t} is not 0 or 1"))),
            Some(_) if !self.has_tail => return Err(self.violation(p, "tail declared on an arena without tail")),
            Some(_) => {}
        }
        Ok(())
    }

    fn take_side(&mut self, arena: Vec<Elem>, side: u8, tail: Option<u8>) {
        self.arena = arena;
        self.has_tail &= tail == Some(side);
        self.in_place_ok &= tail.is_some();
        self.pending = None;
        self.rounds_done += 1;
    }
}

fn is_sorted_unique(v: &[Elem]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Everything a strategy may look at.
pub struct View<'a> {
    pub game: GameKind,
    pub ground: Ground,
    pub player: Player,
    pub round: usize,
    pub window: u64,
    pub window_elems: &'a [Elem],
    pub arena: &'a [Elem],
    pub has_tail: bool,
    pub can_grow: bool,
    pub pending: Option<&'a Pending>,
    pub history: &'a [MoveRecord],
    pub chosen: &'a BTreeSet<Elem>,
}

impl<'a> View<'a> {
    pub fn of(state: &'a GameState, cap: u64) -> Self {
        View {
            game: state.game,
            ground: state.ground,
            player: state.to_move(),
            round: state.rounds_done,
            window: state.window,
            window_elems: &state.window_elems,
            arena: &state.arena,
            has_tail: state.has_tail,
            can_grow: state.growth_option(cap) != Growth::Exhausted,
            pending: state.pending.as_ref(),
            history: &state.records,
            chosen: &state.chosen,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Play(Move),
    Resign,
    NeedMoreWindow,
}

/// A player. Implementations keep no state between calls; everything they
/// need is rebuilt from the view, so one instance can serve many plays.
pub trait Strategy: Send + Sync {
    fn id(&self) -> String;
    fn seed(&self) -> u64 {
        0
    }
    fn act(&self, view: &View) -> Result<Action>;
}

/// Outcome of letting one player act once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Moved,
    Over,
    Restart(u64),
}

/// Lets the player to move act, growing the window as requested. With
/// `allow_restart == false` a growth that needs a restart ends the play.
pub fn step(state: &mut GameState, status: &mut Status, strategy: &dyn Strategy, cap: u64, allow_restart: bool) -> Result<Step> {
    let player = state.to_move();
    loop {
        // G1: Player II must be able to pick a fresh point; the room comes from the window
        if state.game == GameKind::G1 && player == Player::I && !state.has_fresh() {
            match grow_for(state, cap, allow_restart)? {
                Some(step) => {
                    if step == Step::Over {
                        *status = Status::Exhausted { player: Player::II };
                    }
                    return Ok(step);
                }
                None => continue,
            }
        }
        let action = strategy.act(&View::of(state, cap))?;
        match action {
            Action::Play(mv) => {
                return match state.apply(player, mv) {
                    Ok(_) => Ok(Step::Moved),
                    Err(v) => {
                        *status = Status::Illegal { violation: v };
                        Ok(Step::Over)
                    }
                };
            }
            Action::Resign => {
                *status = Status::Resigned { player };
                return Ok(Step::Over);
            }
            Action::NeedMoreWindow => match grow_for(state, cap, allow_restart)? {
                Some(step) => {
                    if step == Step::Over {
                        *status = Status::Exhausted { player };
                    }
                    return Ok(step);
                }
                None => continue,
            },
        }
    }
}

// None: grown in place, ask again
fn grow_for(state: &mut GameState, cap: u64, allow_restart: bool) -> Result<Option<Step>> {
    match state.growth_option(cap) {
        Growth::InPlace => {
            state.grow_in_place()?;
            Ok(None)
        }
        Growth::Restart(w) if allow_restart => Ok(Some(Step::Restart(w))),
        Growth::Restart(_) | Growth::Exhausted => Ok(Some(Step::Over)),
    }
}

pub fn play(game: GameKind, ideal: &IdealSpec, first: &dyn Strategy, second: &dyn Strategy, rounds: usize, policy: WindowPolicy) -> Result<Transcript> {
    if rounds == 0 {
        return Err(Error::Invalid("rounds must be at least 1".into()));
    }
    let ground = ideal.ground();
    let header = Header {
        game,
        ideal: ideal.clone(),
        strategies: [first.id(), second.id()],
        seeds: [first.seed(), second.seed()],
        rounds,
        policy,
    };
    let mut window = policy.initial;
    'attempt: loop {
        let mut state = GameState::new(game, ground, window)?;
        let mut status = Status::Running;
        while state.rounds_done < rounds {
            let s: &dyn Strategy = if state.to_move() == Player::I { first } else { second };
            match step(&mut state, &mut status, s, policy.cap, true)? {
                Step::Moved => {}
                Step::Over => break,
                Step::Restart(w) => {
                    window = w;
                    continue 'attempt;
                }
            }
        }
        if !status.is_over() {
            status = Status::Completed;
        }
        return Ok(Transcript { header, records: state.records, status });
    }
}

/// Replays the records through a fresh referee, independent of how they were made.
pub fn legality_check(t: &Transcript) -> Result<(), Violation> {
    let ground = t.ground();
    let start = t.records.first().map_or(t.header.policy.initial, |r| r.window);
    let fail = |seq: usize, player: Player, reason: String| Violation { seq, player, reason };
    let mut state = GameState::new(t.header.game, ground, start).map_err(|e| fail(0, Player::I, e.to_string()))?;
    for (i, r) in t.records.iter().enumerate() {
        if r.seq != i {
            return Err(fail(i, r.player, format!("sequence number {} out of order", r.seq)));
        }
        while state.window < r.window {
            if state.growth_option(u64::MAX) != Growth::InPlace {
                return Err(fail(i, r.player, "window grew without a tail".into()));
            }
            state.grow_in_place().map_err(|e| fail(i, r.player, e.to_string()))?;
        }
        if state.window != r.window {
            return Err(fail(i, r.player, format!("window {} does not match {}", r.window, state.window)));
        }
        state.apply(r.player, r.mv.clone())?;
    }
    if state.rounds_done > t.header.rounds {
        return Err(fail(t.records.len(), Player::I, "more rounds than the header allows".into()));
    }
    Ok(())
}

/// `φ` of the outcome prefixes up to the first round that fails, with that failure.
pub fn evaluate_partial(t: &Transcript, ideal: &IdealSpec) -> (Vec<SubmeasureValue>, Option<Error>) {
    let (want, got) = (ideal.ground().kind(), t.ground().kind());
    if want != got {
        return (vec![], Some(Error::WrongGround { expected: want.to_string(), got: got.to_string() }));
    }
    let mut acc: Vec<Elem> = Vec::new();
    let mut out = Vec::new();
    for added in t.outcome_by_round() {
        acc.extend(added);
        match FiniteSubset::new(ideal.ground(), acc.iter().cloned()).and_then(|a| ideal.eval(&a)) {
            Ok(v) => out.push(v),
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

/// `φ` of the outcome prefix after each completed round.
pub fn evaluate(t: &Transcript, ideal: &IdealSpec) -> Result<Vec<SubmeasureValue>> {
    let (want, got) = (ideal.ground().kind(), t.ground().kind());
    if want != got {
        return Err(Error::WrongGround { expected: want.to_string(), got: got.to_string() });
    }
    let mut acc: Vec<Elem> = Vec::new();
    let mut out = Vec::new();
    for added in t.outcome_by_round() {
        acc.extend(added);
        out.push(ideal.eval(&FiniteSubset::new(ideal.ground(), acc.iter().cloned())?)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nats(v: &[u64]) -> Vec<Elem> {
        v.iter().map(|&n| Elem::Nat(n)).collect()
    }

    /// Scripted player for engine tests.
    struct Script(Vec<Action>);

    impl Strategy for Script {
        fn id(&self) -> String {
            "script".into()
        }

        fn act(&self, view: &View) -> Result<Action> {
            let mine = view.history.iter().filter(|r| r.player == view.player).count();
            Ok(self.0.get(mine).cloned().unwrap_or(Action::Resign))
        }
    }

    fn cut(l: &[u64], r: &[u64], tail: Option<u8>) -> Action {
        Action::Play(Move::Cut { left: nats(l), right: nats(r), tail })
    }

    fn choose(side: u8, n: u64) -> Action {
        Action::Play(Move::Choose { side, elem: Elem::Nat(n) })
    }

    #[test]
    fn scripted_g1_play() {
        let i = Script(vec![cut(&[0, 1], &[2, 3], None), cut(&[2], &[3], None)]);
        let ii = Script(vec![choose(1, 2), choose(1, 3)]);
        let t = play(GameKind::G1, &IdealSpec::Pc, &i, &ii, 2, WindowPolicy { initial: 4, cap: 4 }).unwrap();
        assert_eq!(t.status, Status::Completed);
        assert_eq!(t.outcome(), nats(&[2, 3]));
        assert_eq!(legality_check(&t), Ok(()));
        let back = Transcript::from_jsonl(&t.to_jsonl()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_jsonl(), t.to_jsonl());
    }

    #[test]
    fn overlapping_cut_is_illegal() {
        let mut s = GameState::new(GameKind::G1, Ground::Naturals, 4).unwrap();
        let err = s.apply(Player::I, Move::Cut { left: nats(&[0, 1, 2]), right: nats(&[2, 3]), tail: None }).unwrap_err();
        assert!(err.reason.contains("overlap"));
        assert!(s.records().is_empty());
        assert!(s.apply(Player::I, Move::Cut { left: nats(&[0]), right: nats(&[2, 3]), tail: None }).is_err());
        assert!(s.apply(Player::II, Move::Choose { side: 0, elem: Elem::Nat(0) }).is_err());
    }

    #[test]
    fn legality_check_catches_edits() {
        let i = Script(vec![cut(&[0, 1], &[2, 3], None)]);
        let ii = Script(vec![choose(0, 1)]);
        let t = play(GameKind::G1, &IdealSpec::Pc, &i, &ii, 1, WindowPolicy { initial: 4, cap: 4 }).unwrap();
        let mut bad = t.clone();
        bad.records[0].mv = Move::Cut { left: nats(&[0, 1, 2]), right: nats(&[2, 3]), tail: None };
        assert_eq!(legality_check(&bad).unwrap_err().seq, 0);
        let mut bad = t.clone();
        bad.records[1].mv = Move::Choose { side: 0, elem: Elem::Nat(3) };
        assert_eq!(legality_check(&bad).unwrap_err().seq, 1);
        let mut bad = t;
        bad.records[1].window = 8;
        assert!(legality_check(&bad).is_err());
    }

    #[test]
    fn g3_point_inside_ideal_play_is_illegal() {
        let ideal: IdealSpec = "somega:depth=1,n=0".parse().unwrap();
        let g = ideal.ground();
        let mut s = GameState::new(GameKind::G3, g, 0).unwrap();
        let w = s.window_elems().to_vec();
        s.apply(Player::I, Move::IdealPlay { set: vec![w[0].clone()] }).unwrap();
        let v = s.apply(Player::II, Move::PointPlay { elem: w[0].clone() }).unwrap_err();
        assert!(v.reason.contains("player I's set"));
        s.apply(Player::II, Move::PointPlay { elem: w[1].clone() }).unwrap();
        let t = Transcript {
            header: Header {
                game: GameKind::G3,
                ideal: ideal.clone(),
                strategies: ["a".into(), "b".into()],
                seeds: [0, 0],
                rounds: 1,
                policy: WindowPolicy { initial: 0, cap: 0 },
            },
            records: s.records().to_vec(),
            status: Status::Completed,
        };
        assert_eq!(legality_check(&t), Ok(()));
        let mut bad = t;
        bad.records[1].mv = Move::PointPlay { elem: w[0].clone() };
        assert!(legality_check(&bad).unwrap_err().reason.contains("player I's set"));
    }

    #[test]
    fn tail_growth_extends_the_tail_side() {
        let mut s = GameState::new(GameKind::G1, Ground::Naturals, 4).unwrap();
        s.apply(Player::I, Move::Cut { left: nats(&[0, 1]), right: nats(&[2, 3]), tail: Some(1) }).unwrap();
        assert_eq!(s.growth_option(8), Growth::InPlace);
        s.grow_in_place().unwrap();
        match s.pending() {
            Some(Pending::Cut { left, right, .. }) => {
                assert_eq!(left, &nats(&[0, 1]));
                assert_eq!(right, &nats(&[2, 3, 4, 5, 6, 7]));
            }
            other => panic!("{other:?}"),
        }
        s.apply(Player::II, Move::Choose { side: 0, elem: Elem::Nat(0) }).unwrap();
        assert!(!s.has_tail());
        // every cut so far named a tail, so the finite side cannot be refreshed
        assert_eq!(s.growth_option(1 << 10), Growth::Exhausted);
    }

    #[test]
    fn untailed_cut_forces_restart() {
        let mut s = GameState::new(GameKind::G1, Ground::Naturals, 4).unwrap();
        s.apply(Player::I, Move::Cut { left: nats(&[0, 1]), right: nats(&[2, 3]), tail: None }).unwrap();
        s.apply(Player::II, Move::Choose { side: 1, elem: Elem::Nat(2) }).unwrap();
        assert_eq!(s.growth_option(8), Growth::Restart(8));
        assert_eq!(s.growth_option(4), Growth::Exhausted);
    }

    #[test]
    fn evaluate_examples() {
        let pairs = |v: &[(u64, u64)]| v.iter().map(|&(a, b)| Elem::Pair(a, b)).collect::<Vec<_>>();
        let records: Vec<MoveRecord> = pairs(&[(0, 0), (1, 1), (2, 0)])
            .into_iter()
            .enumerate()
            .map(|(i, e)| MoveRecord { seq: i, player: Player::II, mv: Move::Choose { side: 0, elem: e }, window: 8 })
            .collect();
        let header = Header {
            game: GameKind::G1,
            ideal: IdealSpec::Ed,
            strategies: ["x".into(), "y".into()],
            seeds: [0, 0],
            rounds: 3,
            policy: WindowPolicy::default_for(&Ground::Pairs),
        };
        let t = Transcript { header: header.clone(), records, status: Status::Completed };
        let f = SubmeasureValue::Finite;
        assert_eq!(evaluate(&t, &IdealSpec::Ed).unwrap(), vec![f(1), f(1), f(1)]);
        assert!(matches!(evaluate(&t, &IdealSpec::Pc), Err(Error::WrongGround { .. })));
        let empty = Transcript { header, records: vec![], status: Status::Completed };
        assert!(evaluate(&empty, &IdealSpec::Ed).unwrap().is_empty());
    }

    #[test]
    fn evaluate_partial_stops_at_the_first_failure() {
        let records: Vec<MoveRecord> = (0..20u64)
            .map(|i| MoveRecord { seq: i as usize, player: Player::II, mv: Move::Choose { side: 0, elem: Elem::Nat(i) }, window: 32 })
            .collect();
        let header = Header {
            game: GameKind::G1,
            ideal: IdealSpec::Pc,
            strategies: ["x".into(), "y".into()],
            seeds: [0, 0],
            rounds: 20,
            policy: WindowPolicy::default_for(&Ground::Naturals),
        };
        let t = Transcript { header, records, status: Status::Completed };
        let (vals, err) = evaluate_partial(&t, &IdealSpec::Pc);
        assert_eq!(vals.len(), crate::ideals::PHI_PC_CAP);
        assert!(matches!(err, Some(Error::CapExceeded { .. })));
        let (vals, err) = evaluate_partial(&t, &IdealSpec::Edm { m: 1 });
        assert_eq!((vals, err), (evaluate(&t, &IdealSpec::Edm { m: 1 }).unwrap(), None));
    }

    #[test]
    fn record_json_shape() {
        let r = MoveRecord { seq: 3, player: Player::II, mv: Move::Choose { side: 1, elem: Elem::Nat(5) }, window: 16 };
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, r#"{"seq":3,"player":"II","kind":"CHOOSE","payload":{"side":1,"elem":5},"window":16}"#);
        assert_eq!(serde_json::from_str::<MoveRecord>(&js).unwrap(), r);
    }
}
