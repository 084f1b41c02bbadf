//! Live games between a human and a registry strategy, over HTTP.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use idealgames::game::{self, legality_check, GameKind, GameState, Growth, Header, Move, MoveRecord, Pending, Player, Status, Step, Strategy, Transcript, WindowPolicy};
use idealgames::ground::Elem;
use idealgames::ideals::{IdealSpec, IDEAL_NAMES};
use idealgames::strategies::{self, STRATEGY_NAMES};
use serde::{Deserialize, Serialize};
use serde_json::json;

/// Strategy slot name recorded in transcripts for the human side.
pub const HUMAN: &str = "human";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SessionStatus {
    AwaitingHuman,
    AwaitingMachine,
    Finished,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateSession {
    pub game: String,
    pub ideal: String,
    pub human: Player,
    pub strategy: String,
    pub seed: u64,
    pub rounds: usize,
}

/// A human move in the transcript record schema; `seq`, `player` and
/// `window` are optional and checked when present. A larger `window` asks
/// for the arena to grow first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HumanMove {
    #[serde(default)]
    pub seq: Option<usize>,
    #[serde(default)]
    pub player: Option<Player>,
    #[serde(flatten)]
    pub mv: Move,
    #[serde(default)]
    pub window: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionState {
    pub id: String,
    pub game: GameKind,
    pub ideal: IdealSpec,
    pub human: Player,
    pub strategy: String,
    pub seed: u64,
    pub rounds: usize,
    pub status: SessionStatus,
    pub result: Status,
    pub to_move: Option<Player>,
    pub window: u64,
    pub arena: Vec<Elem>,
    /// Whether the arena still reaches past the window, so a cut may name a tail side.
    pub has_tail: bool,
    pub pending: Option<Pending>,
    pub transcript: Vec<MoveRecord>,
    /// Grading of the outcome after each completed round; `None` for infinity.
    pub trajectory: Vec<Option<u64>>,
    /// Why the trajectory stops short of the rounds played.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Session {
    id: String,
    header: Header,
    human: Player,
    seed: u64,
    machine: Box<dyn Strategy>,
    state: GameState,
    result: Status,
    phase: SessionStatus,
    error: Option<String>,
}

impl Session {
    fn create(id: String, req: &CreateSession) -> Result<Self, ApiError> {
        let bad = |e: idealgames::Error| ApiError::bad_request(e.to_string());
        let game: GameKind = req.game.parse().map_err(bad)?;
        let ideal: IdealSpec = req.ideal.parse().map_err(bad)?;
        let machine = strategies::build(&req.strategy, req.seed).map_err(bad)?;
        if strategies::role_of(&req.strategy).map_err(bad)? == req.human {
            return Err(ApiError::bad_request(format!("{} plays the same side as the human", req.strategy)));
        }
        if req.rounds == 0 {
            return Err(ApiError::bad_request("rounds must be at least 1"));
        }
        let policy = WindowPolicy::default_for(&ideal.ground());
        let state = GameState::new(game, ideal.ground(), policy.initial).map_err(bad)?;
        let mut strategies: [String; 2] = [HUMAN.into(), HUMAN.into()];
        let mut seeds = [0; 2];
        strategies[req.human.other().index()] = machine.id();
        seeds[req.human.other().index()] = machine.seed();
        let header = Header { game, ideal, strategies, seeds, rounds: req.rounds, policy };
        let mut s = Session { id, header, human: req.human, seed: req.seed, machine, state, result: Status::Running, phase: SessionStatus::AwaitingMachine, error: None };
        s.settle();
        Ok(s)
    }

    fn transcript(&self) -> Transcript {
        Transcript { header: self.header.clone(), records: self.state.records().to_vec(), status: self.result.clone() }
    }

    fn finish(&mut self, status: Status) {
        self.result = status;
        self.phase = SessionStatus::Finished;
    }

    /// Lets the machine move until the human is to move or the game is over.
    /// The window only grows in place; a growth that needs a restart ends the game.
    fn settle(&mut self) {
        let cap = self.header.policy.cap;
        loop {
            if self.phase == SessionStatus::Finished {
                return;
            }
            if self.state.rounds_done() >= self.header.rounds {
                return self.finish(Status::Completed);
            }
            if self.state.to_move() == self.human {
                // in G1 Player II must have a fresh point before I cuts
                if self.state.game == GameKind::G1 && self.human == Player::I && !self.state.has_fresh() {
                    if self.state.growth_option(cap) != Growth::InPlace {
                        return self.finish(Status::Exhausted { player: Player::II });
                    }
                    if let Err(e) = self.state.grow_in_place() {
                        self.error = Some(e.to_string());
                        return self.finish(Status::Exhausted { player: Player::II });
                    }
                    continue;
                }
                self.phase = SessionStatus::AwaitingHuman;
                return;
            }
            self.phase = SessionStatus::AwaitingMachine;
            let mut status = Status::Running;
            match game::step(&mut self.state, &mut status, self.machine.as_ref(), cap, false) {
                Ok(Step::Moved) => {}
                Ok(Step::Over | Step::Restart(_)) => return self.finish(status),
                Err(e) => {
                    self.error = Some(e.to_string());
                    return self.finish(Status::Resigned { player: self.human.other() });
                }
            }
        }
    }

    fn human_move(&mut self, m: HumanMove) -> Result<(), ApiError> {
        if self.phase == SessionStatus::Finished {
            return Err(ApiError::new(StatusCode::CONFLICT, "session is finished"));
        }
        let seq = self.state.records().len();
        let reject = |reason: String| ApiError::violation(game::Violation { seq, player: self.human, reason });
        if m.player.is_some_and(|p| p != self.human) {
            return Err(reject(format!("the human plays {}", self.human)));
        }
        if m.seq.is_some_and(|s| s != seq) {
            return Err(reject(format!("expected move {seq}")));
        }
        // grow on a scratch copy so a rejected move leaves the state as it was
        let mut next = self.state.clone();
        if let Some(w) = m.window {
            while next.window < w {
                if next.growth_option(self.header.policy.cap) != Growth::InPlace {
                    return Err(reject(format!("window cannot grow in place to {w}")));
                }
                next.grow_in_place().map_err(|e| reject(e.to_string()))?;
            }
            if next.window != w {
                return Err(reject(format!("window {w} does not match {}", next.window)));
            }
        }
        next.apply(self.human, m.mv).map_err(ApiError::violation)?;
        self.state = next;
        self.phase = SessionStatus::AwaitingMachine;
        self.settle();
        Ok(())
    }

    fn view(&self) -> SessionState {
        let t = self.transcript();
        let (phi, err) = game::evaluate_partial(&t, &self.header.ideal);
        let trajectory = phi.iter().map(|x| x.finite()).collect();
        SessionState {
            id: self.id.clone(),
            game: self.header.game,
            ideal: self.header.ideal.clone(),
            human: self.human,
            strategy: self.header.strategies[self.human.other().index()].clone(),
            seed: self.seed,
            rounds: self.header.rounds,
            status: self.phase,
            result: self.result.clone(),
            to_move: (self.phase != SessionStatus::Finished).then(|| self.state.to_move()),
            window: self.state.window,
            arena: self.state.arena().to_vec(),
            has_tail: self.state.has_tail(),
            pending: self.state.pending().cloned(),
            transcript: t.records,
            trajectory,
            trajectory_error: err.map(|e| e.to_string()),
            error: self.error.clone(),
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, msg: impl Into<String>) -> Self {
        ApiError { status, body: json!({ "error": msg.into() }) }
    }

    fn bad_request(msg: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, msg)
    }

    fn violation(v: game::Violation) -> Self {
        ApiError { status: StatusCode::UNPROCESSABLE_ENTITY, body: json!({ "error": v.to_string(), "violation": v }) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    next: AtomicU64,
    data_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(data_dir: Option<PathBuf>) -> Self {
        AppState { data_dir, ..Default::default() }
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let map = self.sessions.read().expect("session map lock");
        map.get(id).cloned().ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session {id:?}")))
    }

    fn persist(&self, s: &Session) {
        if let (Some(dir), SessionStatus::Finished) = (&self.data_dir, s.phase) {
            // the served state stays authoritative; a failed write only loses the file
            let _ = std::fs::write(dir.join(format!("session-{}.jsonl", s.id)), s.transcript().to_jsonl());
        }
    }
}

async fn create(State(app): State<Arc<AppState>>, Json(req): Json<CreateSession>) -> Result<(StatusCode, Json<SessionState>), ApiError> {
    let id = app.next.fetch_add(1, Ordering::Relaxed).to_string();
    let s = tokio::task::spawn_blocking(move || Session::create(id, &req))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    app.persist(&s);
    let view = s.view();
    app.sessions.write().expect("session map lock").insert(s.id.clone(), Arc::new(Mutex::new(s)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_state(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<SessionState>, ApiError> {
    let s = app.get(&id)?;
    let view = s.lock().expect("session lock").view();
    Ok(Json(view))
}

async fn post_move(State(app): State<Arc<AppState>>, Path(id): Path<String>, Json(m): Json<HumanMove>) -> Result<Json<SessionState>, ApiError> {
    let s = app.get(&id)?;
    let app2 = app.clone();
    tokio::task::spawn_blocking(move || {
        let mut s = s.lock().expect("session lock");
        s.human_move(m)?;
        app2.persist(&s);
        Ok(Json(s.view()))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

/// Served transcript prefix, checked by the referee.
async fn get_transcript(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<String, ApiError> {
    let s = app.get(&id)?;
    let t = s.lock().expect("session lock").transcript();
    legality_check(&t).map_err(ApiError::violation)?;
    Ok(t.to_jsonl())
}

async fn registries() -> Json<serde_json::Value> {
    let strategies: Vec<_> = STRATEGY_NAMES
        .iter()
        .map(|n| json!({ "name": n, "role": strategies::role_of(n).ok() }))
        .collect();
    Json(json!({
        "games": ["g1", "gfin", "g3"],
        "ideals": IDEAL_NAMES,
        "strategies": strategies,
    }))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(get_state))
        .route("/sessions/{id}/moves", post(post_move))
        .route("/sessions/{id}/transcript", get(get_transcript))
        .route("/registries", get(registries))
        .with_state(state)
}

pub async fn serve(port: u16, data_dir: Option<PathBuf>) -> anyhow::Result<()> {
    if let Some(d) = &data_dir {
        std::fs::create_dir_all(d)?;
    }
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(AppState::new(data_dir)))).await?;
    Ok(())
}
