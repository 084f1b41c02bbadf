//! Argument parsing and subcommand dispatch.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use idealgames::clopen::{self, ClopenSet};
use idealgames::game::{self, legality_check, GameKind, Transcript, WindowPolicy};
use idealgames::ground::{Elem, FiniteSubset};
use idealgames::hypergraph::{self, Coloring, RadoOptions, RadoTable};
use idealgames::ideals::IdealSpec;
use idealgames::katetov::{self, Generator, KatetovMap, ReductionSpec};
use idealgames::strategies;
use idealgames::tree::{self, NodePath};

use crate::batch::{self, RunManifest};
use crate::service;

#[derive(Debug, Parser)]
#[command(name = "idealgames", version, about = "Gradings, games and Katetov checks for ideals on countable sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gradings of finite sets.
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// The pairing tree on the naturals.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Clopen subsets of Cantor space.
    #[command(subcommand)]
    Clopen(ClopenCmd),
    /// Cut and choose games.
    #[command(subcommand)]
    Game(GameCmd),
    /// Staged random hypergraphs.
    #[command(subcommand)]
    Rado(RadoCmd),
    /// Homogeneous set searches.
    #[command(subcommand)]
    Ramsey(RamseyCmd),
    /// Katetov reduction checks.
    #[command(subcommand)]
    Katetov(KatetovCmd),
    /// Session service for live games.
    Serve {
        #[arg(long, env = "IDEALGAMES_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "IDEALGAMES_DATA_DIR")]
        data_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum IdealCmd {
    /// Grading of the set in FILE, one element per line.
    Eval {
        #[arg(long)]
        ideal: String,
        /// Extra parameters, `key=value,...`.
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        set: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum TreeCmd {
    /// Node of depth D containing N.
    Branch {
        n: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// First C members of the node S, e.g. `0,2`.
    Members {
        node: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Debug, Args)]
pub struct ClopenFile {
    /// One clopen set per line, generators comma separated.
    #[arg(long)]
    pub file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ClopenCmd {
    Measure(ClopenFile),
    Tilde {
        #[command(flatten)]
        input: ClopenFile,
        #[arg(long)]
        n: usize,
    },
    Xu {
        #[command(flatten)]
        input: ClopenFile,
        #[arg(long)]
        depth: usize,
    },
    Yu(ClopenFile),
    /// `φ_n` of the whole file as one family.
    Phisn {
        #[command(flatten)]
        input: ClopenFile,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[arg(long)]
    pub game: String,
    #[arg(long)]
    pub ideal: String,
    #[arg(long = "i")]
    pub first: String,
    #[arg(long = "ii")]
    pub second: String,
    #[arg(long)]
    pub rounds: usize,
    #[arg(long, env = "IDEALGAMES_SEED")]
    pub seed: u64,
    #[arg(long)]
    pub window: Option<u64>,
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long, default_value = "transcript.jsonl")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    /// One game; writes the transcript and prints the trajectory.
    Play(PlayArgs),
    /// Every cell of a manifest, concurrently.
    Batch {
        #[arg(long)]
        manifest: PathBuf,
        /// Overrides the manifest's output directory.
        #[arg(long, env = "IDEALGAMES_OUT_DIR")]
        out: Option<PathBuf>,
    },
    /// Referee check and replay of a transcript file.
    Check { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum RadoCmd {
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        stages: usize,
        #[arg(long)]
        family_cap: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive star check over the last processed stage.
    Check {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = usize::MAX)]
        cap: usize,
    },
    /// Embeds a coloring file into the table.
    Embed {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        /// Adds witness vertices when the table is too small, writing the grown table here.
        #[arg(long)]
        extend: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RamseyCmd {
    Search {
        #[arg(long, conflicts_with_all = ["edm", "verify_ramsey"])]
        coloring: Option<PathBuf>,
        /// Uses the separation coloring with parameter M.
        #[arg(long, requires = "vertices")]
        edm: Option<usize>,
        #[arg(long)]
        vertices: Option<u64>,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u128,
        /// Checks that every 2-coloring of K_V has a monochromatic triangle.
        #[arg(long, value_name = "V")]
        verify_ramsey: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum KatetovCmd {
    Check {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// identity, constant, y-u or embedding.
        #[arg(long)]
        map: String,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        windows: Vec<u64>,
        #[arg(long, env = "IDEALGAMES_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        count: usize,
        /// Generators, `;` separated; sampled from the source when absent.
        #[arg(long)]
        generators: Option<String>,
        /// Image of a constant map, as one line of the target's set file.
        #[arg(long)]
        value: Option<String>,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn clopens(input: &ClopenFile) -> Result<Vec<ClopenSet>> {
    let text = read(&input.file)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with('#') || t.is_empty() {
            continue;
        }
        out.push(if t == "{}" { ClopenSet::empty() } else { t.parse()? });
    }
    Ok(out)
}

fn load_table(path: &PathBuf) -> Result<RadoTable> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing table {}", path.display()))
}

fn ideal_with(name: &str, param: Option<&str>) -> Result<IdealSpec> {
    let full = match param {
        Some(p) if name.contains(':') => format!("{name},{p}"),
        Some(p) => format!("{name}:{p}"),
        None => name.to_string(),
    };
    Ok(full.parse()?)
}

fn run_ideal(cmd: IdealCmd, out: &mut impl Write) -> Result<()> {
    let IdealCmd::Eval { ideal, param, set } = cmd;
    let spec = ideal_with(&ideal, param.as_deref())?;
    let a = FiniteSubset::parse(spec.ground(), &read(&set)?)?;
    writeln!(out, "{}", spec.eval(&a)?)?;
    Ok(())
}

fn run_tree(cmd: TreeCmd, out: &mut impl Write) -> Result<()> {
    match cmd {
        TreeCmd::Branch { n, depth } => writeln!(out, "{}", tree::branch_prefix(n, depth))?,
        TreeCmd::Members { node, count } => {
            let s: NodePath = node.parse()?;
            let m = tree::node_members(&s, count)?;
            writeln!(out, "{}", m.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))?;
        }
    }
    Ok(())
}

fn run_clopen(cmd: ClopenCmd, out: &mut impl Write) -> Result<()> {
    match cmd {
        ClopenCmd::Measure(f) => {
            for u in clopens(&f)? {
                writeln!(out, "{}", clopen::measure(&u))?;
            }
        }
        ClopenCmd::Tilde { input, n } => {
            for u in clopens(&input)? {
                writeln!(out, "{}", clopen::tilde(&u, n))?;
            }
        }
        ClopenCmd::Xu { input, depth } => {
            for u in clopens(&input)? {
                writeln!(out, "{}", clopen::x_u(&u, depth)?)?;
            }
        }
        ClopenCmd::Yu(f) => {
            for u in clopens(&f)? {
                writeln!(out, "{}", clopen::y_u_dyadic(&u)?)?;
            }
        }
        ClopenCmd::Phisn { input, n } => writeln!(out, "{}", clopen::phi_sn(n, &clopens(&input)?)?)?,
    }
    Ok(())
}

fn trajectory_line(t: &Transcript) -> String {
    let (phi, err) = game::evaluate_partial(t, &t.header.ideal);
    let mut line = phi.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    if let Some(e) = err {
        line.push_str(&format!(" (stopped: {e})"));
    }
    line
}

fn run_game(cmd: GameCmd, out: &mut impl Write) -> Result<()> {
    match cmd {
        GameCmd::Play(a) => {
            let game: GameKind = a.game.parse()?;
            let ideal: IdealSpec = a.ideal.parse()?;
            let first = strategies::build(&a.first, a.seed)?;
            let second = strategies::build(&a.second, a.seed)?;
            let d = WindowPolicy::default_for(&ideal.ground());
            let policy = WindowPolicy { initial: a.window.unwrap_or(d.initial), cap: a.cap.unwrap_or(d.cap) };
            let t = game::play(game, &ideal, first.as_ref(), second.as_ref(), a.rounds, policy)?;
            fs::write(&a.out, t.to_jsonl()).with_context(|| format!("writing {}", a.out.display()))?;
            writeln!(out, "status: {}", serde_json::to_string(&t.status)?)?;
            writeln!(out, "trajectory: {}", trajectory_line(&t))?;
            writeln!(out, "transcript: {}", a.out.display())?;
        }
        GameCmd::Batch { manifest, out: dir } => {
            let mut m = RunManifest::load(&manifest)?;
            if let Some(d) = dir {
                m.output = d;
            }
            let rows = batch::batch_run(&m)?;
            write!(out, "{}", batch::render_summary(&rows))?;
        }
        GameCmd::Check { file } => {
            let text = read(&file)?;
            let t = Transcript::from_jsonl(&text)?;
            if let Err(v) = legality_check(&t) {
                bail!("illegal transcript: {v}");
            }
            let same = strategies::replays_identically(&text)?;
            writeln!(out, "legal: true")?;
            writeln!(out, "replays identically: {same}")?;
            writeln!(out, "trajectory: {}", trajectory_line(&t))?;
            if !same {
                bail!("replay differs from {}", file.display());
            }
        }
    }
    Ok(())
}

fn run_rado(cmd: RadoCmd, out: &mut impl Write) -> Result<()> {
    match cmd {
        RadoCmd::Build { n, k, stages, family_cap, out: path } => {
            let t = hypergraph::build_rado_with(n, k, stages, RadoOptions { family_cap, ..RadoOptions::default() })?;
            fs::write(&path, serde_json::to_string(&t)?).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "stage sizes: {:?}", t.sizes)?;
            writeln!(out, "witnesses: {}", t.log.len())?;
        }
        RadoCmd::Check { table, cap } => {
            let t = load_table(&table)?;
            let r = hypergraph::star_check_exhaustive(&t, cap)?;
            writeln!(out, "source stage size: {}", r.source)?;
            writeln!(out, "systems checked: {}", r.checked)?;
            writeln!(out, "missing: {}", r.missing.len())?;
            for f in &r.missing {
                writeln!(out, "  {f}")?;
            }
            if !r.missing.is_empty() {
                bail!("{} family systems have no witness", r.missing.len());
            }
        }
        RadoCmd::Embed { table, coloring, extend } => {
            let mut t = load_table(&table)?;
            let c = Coloring::parse(&read(&coloring)?)?;
            let f = match &extend {
                Some(path) => {
                    let f = hypergraph::embed_coloring_extending(&c, &mut t)?;
                    fs::write(path, serde_json::to_string(&t)?).with_context(|| format!("writing {}", path.display()))?;
                    f
                }
                None => hypergraph::embed_coloring(&c, &t)?,
            };
            for (x, y) in f.iter().enumerate() {
                writeln!(out, "{x} {y}")?;
            }
        }
    }
    Ok(())
}

fn run_ramsey(cmd: RamseyCmd, out: &mut impl Write) -> Result<()> {
    let RamseyCmd::Search { coloring, edm, vertices, size, l, budget, verify_ramsey } = cmd;
    if let Some(v) = verify_ramsey {
        let holds = hypergraph::every_coloring_has_mono_triangle(v)?;
        writeln!(out, "every 2-coloring of K_{v} has a monochromatic triangle: {holds}")?;
        return Ok(());
    }
    let c = match (coloring, edm, vertices) {
        (Some(p), _, _) => Coloring::parse(&read(&p)?)?,
        (None, Some(m), Some(v)) => hypergraph::edm_pair_coloring(m, v)?,
        _ => bail!("give --coloring FILE, --edm M --vertices V, or --verify-ramsey V"),
    };
    match hypergraph::find_homogeneous(&c, size, l, budget)? {
        Some(s) => writeln!(out, "{}", s.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))?,
        None => writeln!(out, "none")?,
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn katetov_spec(from: &str, to: &str, map: &str, value: Option<&str>, coloring: Option<&PathBuf>, table: Option<&PathBuf>, l: usize) -> Result<ReductionSpec> {
    let target: IdealSpec = to.parse()?;
    Ok(match map {
        "identity" => ReductionSpec { source: from.into(), target, map: KatetovMap::Identity },
        "constant" => {
            let v = value.context("a constant map needs --value")?;
            let e: Elem = from.parse::<IdealSpec>()?.ground().parse_elem(v)?;
            ReductionSpec { source: from.into(), target, map: KatetovMap::Constant(e) }
        }
        "y-u" => ReductionSpec { source: from.into(), target, map: KatetovMap::YU },
        "embedding" => {
            let c = Coloring::parse(&read(coloring.context("an embedding map needs --coloring")?)?)?;
            let t = load_table(table.context("an embedding map needs --table")?)?;
            katetov::coloring_reduction(&c, &t, l, target)?
        }
        other => bail!("unknown map {other:?}; expected identity, constant, y-u or embedding"),
    })
}

fn run_katetov(cmd: KatetovCmd, out: &mut impl Write) -> Result<()> {
    let KatetovCmd::Check { from, to, map, windows, seed, count, generators, value, coloring, table, l, out: path } = cmd;
    let spec = katetov_spec(&from, &to, &map, value.as_deref(), coloring.as_ref(), table.as_ref(), l)?;
    let gens: Vec<Generator> = match (&generators, &spec.map) {
        (Some(g), _) => g.split(';').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<idealgames::Result<_>>()?,
        (None, KatetovMap::Embedding { .. }) => katetov::monochromatic_generators(&spec.map)?,
        (None, _) => katetov::sample_generators(&from.parse()?, count, seed)?,
    };
    let report = katetov::check_reduction(&spec, &gens, &windows)?;
    let text = report.to_jsonl();
    match path {
        Some(p) => fs::write(&p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => write!(out, "{text}")?,
    }
    Ok(())
}

/// Runs one parsed command, writing results to `out`.
pub fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Ideal(c) => run_ideal(c, out),
        Command::Tree(c) => run_tree(c, out),
        Command::Clopen(c) => run_clopen(c, out),
        Command::Game(c) => run_game(c, out),
        Command::Rado(c) => run_rado(c, out),
        Command::Ramsey(c) => run_ramsey(c, out),
        Command::Katetov(c) => run_katetov(c, out),
        Command::Serve { port, data_dir } => {
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            rt.block_on(service::serve(port, data_dir))
        }
    }
}

/// Exit status: 0 on success, 2 on a usage error, 1 on a domain error.
pub fn dispatch<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

