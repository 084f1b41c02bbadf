//! Tournament runs from a manifest, one transcript file per (cell, seed).

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use idealgames::game::{self, legality_check, GameKind, Transcript, WindowPolicy};
use idealgames::ideals::IdealSpec;
use idealgames::strategies;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// What a cell promises about the final grading of the outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    AtMost(u64),
    AtLeast(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub game: String,
    pub ideal: String,
    pub i: String,
    pub ii: String,
    pub rounds: usize,
    /// One run per seed; a manifest without seeds is rejected at parse time.
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<WindowPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<Guarantee>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub output: PathBuf,
    #[serde(default)]
    pub cells: Vec<Cell>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut m: RunManifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if m.output.is_relative() {
            if let Some(dir) = path.parent() {
                m.output = dir.join(&m.output);
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub cell: usize,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    pub rounds_played: usize,
    /// Final grading of the outcome; `None` for infinity or when the run failed.
    pub phi: Option<u64>,
    pub legal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunSummary {
    fn failed(cell: usize, seed: Option<u64>, err: anyhow::Error) -> Self {
        RunSummary { cell, seed, file: None, status: None, rounds_played: 0, phi: None, legal: false, guarantee: None, error: Some(format!("{err:#}")) }
    }
}

fn play_one(cell: &Cell, seed: u64) -> Result<Transcript> {
    let game: GameKind = cell.game.parse()?;
    let ideal: IdealSpec = cell.ideal.parse()?;
    let first = strategies::build(&cell.i, seed)?;
    let second = strategies::build(&cell.ii, seed)?;
    let policy = cell.policy.unwrap_or_else(|| WindowPolicy::default_for(&ideal.ground()));
    Ok(game::play(game, &ideal, first.as_ref(), second.as_ref(), cell.rounds, policy)?)
}

fn run_one(m: &RunManifest, index: usize, cell: &Cell, seed: u64) -> Result<RunSummary> {
    let t = play_one(cell, seed)?;
    let name = format!("{}-{index}-{seed}.jsonl", m.experiment);
    fs::write(m.output.join(&name), t.to_jsonl()).with_context(|| format!("writing {name}"))?;
    let phi = game::evaluate(&t, &t.header.ideal)?.last().and_then(|v| v.finite()).or(Some(0));
    let guarantee = cell.guarantee.map(|g| match (g, phi) {
        (Guarantee::AtMost(b), Some(v)) => v <= b,
        (Guarantee::AtMost(_), None) => false,
        (Guarantee::AtLeast(b), v) => v.is_none_or(|v| v >= b),
    });
    Ok(RunSummary {
        cell: index,
        seed: Some(seed),
        file: Some(name),
        status: Some(serde_json::to_value(&t.status)?["state"].as_str().unwrap_or_default().to_string()),
        rounds_played: t.rounds_played(),
        phi,
        legal: legality_check(&t).is_ok(),
        guarantee,
        error: None,
    })
}

/// Runs every (cell, seed) concurrently and writes the transcripts and
/// `summary.jsonl` to the output directory. A failing run is recorded, not fatal.
pub fn batch_run(m: &RunManifest) -> Result<Vec<RunSummary>> {
    fs::create_dir_all(&m.output).with_context(|| format!("creating {}", m.output.display()))?;
    let jobs: Vec<(usize, &Cell, Option<u64>)> = m
        .cells
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            if c.seeds.is_empty() {
                vec![(i, c, None)]
            } else {
                c.seeds.iter().map(|&s| (i, c, Some(s))).collect()
            }
        })
        .collect();
    let rows: Vec<RunSummary> = jobs
        .par_iter()
        .map(|&(i, c, seed)| match seed {
            None => RunSummary::failed(i, None, anyhow::anyhow!("cell has no seeds")),
            Some(s) => run_one(m, i, c, s).unwrap_or_else(|e| RunSummary::failed(i, Some(s), e)),
        })
        .collect();
    let mut out = String::new();
    for r in &rows {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    fs::write(m.output.join("summary.jsonl"), out).context("writing summary")?;
    Ok(rows)
}

/// Fixed width table of a batch summary.
pub fn render_summary(rows: &[RunSummary]) -> String {
    let mut out = format!("{:>4} {:>6} {:<10} {:>6} {:>5} {:>5} {:<9} {}\n", "cell", "seed", "status", "rounds", "phi", "legal", "guarantee", "file");
    for r in rows {
        let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        let g = match r.guarantee {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "-",
        };
        let tail = r.error.as_deref().map_or_else(|| r.file.clone().unwrap_or_default(), |e| format!("error: {e}"));
        out.push_str(&format!(
            "{:>4} {:>6} {:<10} {:>6} {:>5} {:>5} {:<9} {}\n",
            r.cell,
            opt(r.seed),
            r.status.as_deref().unwrap_or("-"),
            r.rounds_played,
            if r.error.is_some() { "-".into() } else { opt(r.phi) },
            r.legal,
            g,
            tail
        ));
    }
    out
}
