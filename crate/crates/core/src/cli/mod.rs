//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error (bad flags, unknown rule or game
//! name, malformed rule spec), 3 input-data error (unreadable or invalid
//! files, out-of-range values).

pub mod presets;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::engine::{self, EngineError, RecordMode, RunSummary, SimConfig};
use crate::games::builtin::builtin;
use crate::games::io::{load_distribution, load_game, DistributionSpec};
use crate::games::{ce_time_bound, Game, GameError, JointDistribution, MixedProfile, PureProfile};
use crate::rng::PRNG_IDENTITY;
use crate::rules::{parse_rule_list, RuleError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "uncoupled",
    version,
    about = "Repeated-game learning dynamics simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and print a summary.
    Simulate(SimulateArgs),
    /// Run independent replicates and print a JSON report.
    Batch(BatchArgs),
    /// Check a profile or distribution against the equilibrium concepts.
    Check(CheckArgs),
    /// Periods needed for a correlated eps-equilibrium with probability 1 - delta.
    Bound(BoundArgs),
    /// Run a canned experiment.
    Preset(PresetArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Builtin game name or path to a game file.
    #[arg(long)]
    pub game: String,
    /// Comma-separated rule specs, one per player or one for all.
    #[arg(long)]
    pub rules: String,
    #[arg(long)]
    pub horizon: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// full, thin:k or summary.
    #[arg(long)]
    pub record: Option<RecordMode>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Trace CSV destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Rule-event CSV destination.
    #[arg(long)]
    pub events: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 100)]
    pub runs: u64,
    /// Report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["profile", "dist"])))]
pub struct CheckArgs {
    #[arg(long)]
    pub game: String,
    /// Pure profile with 1-based actions, e.g. `1,2`.
    #[arg(long)]
    pub profile: Option<String>,
    /// Distribution file with `joint` or `mixed`.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub players: usize,
    /// Action counts, one per player or one for all.
    #[arg(long, value_delimiter = ',')]
    pub actions: Vec<usize>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    /// Trial-and-error on Entry Deterrence with three acceptance functions.
    Table1,
    /// Regret matching on Matching Pennies: cumulative and windowed series.
    MpRm,
    /// Experimental regret testing on Entry Deterrence, one row per frame.
    Ert,
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    pub name: PresetName,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub runs: Option<u64>,
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long, default_value_t = presets::MP_RM_WINDOW)]
    pub window: u64,
    #[arg(long, default_value_t = presets::MP_RM_STRIDE)]
    pub stride: u64,
    #[arg(long)]
    pub frames: Option<u64>,
    /// Output file; for mp-rm a directory receiving cumulative.csv and windows.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    match execute(&cli.command, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Simulate(a) => simulate(a, out),
        Command::Batch(a) => batch(a, out),
        Command::Check(a) => check(a, out),
        Command::Bound(a) => bound(a, out),
        Command::Preset(a) => preset(a, out),
    }
}

/// Reads a game file if `arg` names one, else resolves a builtin.
pub fn resolve_game(arg: &str) -> Result<Game, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        return load_game(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")));
    }
    match builtin(arg) {
        Ok(g) => Ok(g),
        Err(GameError::UnknownBuiltin(_)) if arg.contains(['/', '\\']) || arg.ends_with(".toml") => {
            Err(CliError::Input(format!("game file `{arg}` not found")))
        }
        Err(e @ GameError::UnknownBuiltin(_)) => Err(CliError::Usage(format!(
            "{e}; expected a game file or one of matching-pennies, entry-deterrence, battle-of-sexes, coordination, random[...]"
        ))),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

fn rule_error(e: RuleError) -> CliError {
    match e {
        RuleError::UnknownRule(_) | RuleError::BadParameter { .. } => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    }
}

fn build_config(a: &RunArgs, default_record: RecordMode) -> Result<SimConfig, CliError> {
    let game = resolve_game(&a.game)?;
    let rules = parse_rule_list(&a.rules, game.num_players()).map_err(rule_error)?;
    let cfg = SimConfig::new(game, rules, a.horizon, a.seed)
        .with_record(a.record.unwrap_or(default_record));
    cfg.validate()?;
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn echo_config(cfg: &SimConfig, command: &str, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "# command = {command}")?;
    writeln!(out, "# game = {}", cfg.game.name().unwrap_or("unnamed"))?;
    let rules: Vec<String> = cfg.resolved_rules().iter().map(|r| r.to_string()).collect();
    writeln!(out, "# rules = {}", rules.join(" | "))?;
    writeln!(out, "# horizon = {}", cfg.horizon)?;
    writeln!(out, "# seed = {}", cfg.seed)?;
    writeln!(out, "# record = {}", cfg.record)?;
    writeln!(out, "# prng = {PRNG_IDENTITY}")
}

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = build_config(&a.run, RecordMode::Full)?;
    echo_config(&cfg, "simulate", out)?;
    let trace = engine::run(&cfg)?;
    if let Some(path) = &a.out {
        engine::write_trace_csv(&trace, create(path)?)?;
    }
    if let Some(path) = &a.events {
        engine::write_events_csv(&trace, create(path)?)?;
    }
    let game = trace.game();
    let targets = game.pure_nash_equilibria();
    let summary = RunSummary::from_trace(0, &trace, &targets);
    writeln!(out, "periods = {}", summary.periods)?;
    writeln!(out, "final_profile = {}", summary.final_profile)?;
    writeln!(out, "final_is_pure_nash = {}", summary.final_is_pure_nash)?;
    writeln!(out, "constant_since = {}", summary.constant_since)?;
    writeln!(out, "min_ce_eps = {}", summary.min_ce_eps)?;
    for (s, f) in targets.iter().zip(&summary.nash_frequencies) {
        writeln!(out, "freq{s} = {f}")?;
    }
    writeln!(out, "redraws = {}", summary.redraws)?;
    let joint = JointDistribution::from_counts(trace.counts());
    for (idx, p) in joint.probs().iter().enumerate() {
        if *p > 0.0 {
            writeln!(out, "phi{} = {p}", game.profile_at(idx))?;
        }
    }
    Ok(())
}

fn batch(a: &BatchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = build_config(&a.run, RecordMode::Summary)?;
    if a.runs == 0 {
        return Err(CliError::Input("--runs must be at least 1".into()));
    }
    let report = engine::batch(&cfg, a.runs)?;
    match &a.out {
        Some(path) => writeln!(create(path)?, "{}", report.to_json())?,
        None => writeln!(out, "{}", report.to_json())?,
    }
    Ok(())
}

/// Parses `1,2,...` into a 0-based profile.
pub fn parse_profile(text: &str, game: &Game) -> Result<PureProfile, CliError> {
    let actions = text
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|a| match a.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(CliError::Input(format!(
                "profile `{text}`: actions are 1-based integers, got `{}`",
                a.trim()
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let profile = PureProfile(actions);
    game.check_profile(&profile)?;
    Ok(profile)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(a: &CheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(a.eps >= 0.0) || !a.eps.is_finite() {
        return Err(CliError::Input(format!(
            "--eps must be finite and >= 0, got {}",
            a.eps
        )));
    }
    let game = resolve_game(&a.game)?;
    writeln!(out, "# game = {}", game.name().unwrap_or("unnamed"))?;
    writeln!(out, "# eps = {}", a.eps)?;
    let (mixed, joint) = match (&a.profile, &a.dist) {
        (Some(text), _) => {
            let s = parse_profile(text, &game)?;
            writeln!(out, "# profile = {s}")?;
            writeln!(out, "PURE-NE: {}", yes(game.is_pure_nash(&s, a.eps)?))?;
            (
                Some(MixedProfile::pure(&game, &s)?),
                JointDistribution::point_mass(&game, &s)?,
            )
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            writeln!(out, "# dist = {}", path.display())?;
            match load_distribution(&text, &game)? {
                DistributionSpec::Mixed(x) => {
                    let q = JointDistribution::product(&game, &x);
                    (Some(x), q)
                }
                DistributionSpec::Joint(q) => (None, q),
            }
        }
        (None, None) => return Err(CliError::Usage("give --profile or --dist".into())),
    };
    if let Some(x) = &mixed {
        writeln!(
            out,
            "MIXED-eps-NE: {}",
            yes(game.is_mixed_eps_nash(x, a.eps)?)
        )?;
        writeln!(out, "nash_gap = {}", game.nash_gap(x)?)?;
    }
    writeln!(
        out,
        "CE-eps: {}",
        yes(game.is_correlated_eps_eq(&joint, a.eps)?)
    )?;
    writeln!(out, "min_ce_eps = {}", game.min_ce_eps(&joint)?)?;
    Ok(())
}

fn bound(a: &BoundArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let actions = match a.actions.as_slice() {
        [m] => vec![*m; a.players],
        list => list.to_vec(),
    };
    let value = ce_time_bound(a.players, &actions, a.eps, a.delta)?;
    writeln!(out, "# players = {}", a.players)?;
    writeln!(out, "# actions = {actions:?}")?;
    writeln!(out, "# eps = {}", a.eps)?;
    writeln!(out, "# delta = {}", a.delta)?;
    writeln!(out, "bound = {value}")?;
    Ok(())
}

fn positive(name: &str, v: u64) -> Result<u64, CliError> {
    if v == 0 {
        return Err(CliError::Input(format!("--{name} must be at least 1")));
    }
    Ok(v)
}

fn preset(a: &PresetArgs, out: &mut dyn Write) -> Result<(), CliError> {
    match a.name {
        PresetName::Table1 => {
            let runs = positive("runs", a.runs.unwrap_or(presets::TABLE1_RUNS))?;
            let horizon = positive("horizon", a.horizon.unwrap_or(presets::TABLE1_HORIZON))?;
            let rows = presets::table1(a.seed, runs, horizon)?;
            match &a.out {
                Some(path) => presets::write_table1(&rows, a.seed, runs, horizon, create(path)?)?,
                None => presets::write_table1(&rows, a.seed, runs, horizon, out)?,
            }
        }
        PresetName::MpRm => {
            let horizon = positive("horizon", a.horizon.unwrap_or(presets::MP_RM_HORIZON))?;
            let (window, stride) = (positive("window", a.window)?, positive("stride", a.stride)?);
            let series = presets::mp_rm(a.seed, horizon, window, stride)?;
            let cfg = presets::mp_rm_config(horizon, a.seed);
            let header = |name: &str| {
                vec![
                    ("preset", "mp-rm".to_string()),
                    ("series", name.to_string()),
                    ("game", "matching-pennies".to_string()),
                    ("rules", format!("{} x2", cfg.resolved_rules()[0])),
                    ("horizon", horizon.to_string()),
                    ("window", window.to_string()),
                    ("stride", stride.to_string()),
                    ("seed", a.seed.to_string()),
                    ("prng", PRNG_IDENTITY.to_string()),
                ]
            };
            match &a.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    presets::write_series(
                        &cfg.game,
                        &series.cumulative,
                        &header("cumulative"),
                        create(&dir.join("cumulative.csv"))?,
                    )?;
                    presets::write_series(
                        &cfg.game,
                        &series.windows,
                        &header("windows"),
                        create(&dir.join("windows.csv"))?,
                    )?;
                }
                None => {
                    presets::write_series(
                        &cfg.game,
                        &series.cumulative,
                        &header("cumulative"),
                        &mut *out,
                    )?;
                    writeln!(out)?;
                    presets::write_series(
                        &cfg.game,
                        &series.windows,
                        &header("windows"),
                        &mut *out,
                    )?;
                }
            }
        }
        PresetName::Ert => {
            let frames = positive("frames", a.frames.unwrap_or(presets::ERT_FRAMES))?;
            let rows = presets::ert_frames(a.seed, frames)?;
            match &a.out {
                Some(path) => presets::write_frames(&rows, a.seed, frames, create(path)?)?,
                None => presets::write_frames(&rows, a.seed, frames, out)?,
            }
        }
    }
    Ok(())
}
