//! Seeded repeated-game runner.
//!
//! Each period every rule is asked for its mixed action, a pure action is
//! drawn from that player's own action stream, payoffs are looked up and
//! every rule receives the feedback its information class allows. All
//! players share one period clock.

mod batch;
mod export;
mod trace;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::games::{Game, GameError, PureProfile};
use crate::rng::{Purpose, StreamRng, Streams};
use crate::rules::{Feedback, InfoClass, PlayerContext, RuleError, RuleInstance, RuleSpec};

pub use batch::{batch, batch_map, Aggregate, BatchReport, RunSummary};
pub use export::{write_events_csv, write_trace_csv};
pub use trace::{PeriodRecord, TimedEvent, Trace};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("player {player}: {source}")]
    Rule { player: usize, source: RuleError },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("{0} needs a full trace")]
    NeedsFullTrace(&'static str),
    #[error("period {t} out of range 1..={len}")]
    PeriodOutOfRange { t: u64, len: u64 },
    #[error("window {window} longer than the trace ({len} periods)")]
    WindowTooLong { window: u64, len: u64 },
    #[error("export failed: {0}")]
    Export(String),
}

/// How much of each run is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordMode {
    Full,
    /// Every k-th period (and the last one).
    Thin(u64),
    /// Counts, absorption and rule events only.
    Summary,
}

impl RecordMode {
    fn keeps(self, t: u64, horizon: u64) -> bool {
        match self {
            RecordMode::Full => true,
            RecordMode::Thin(k) => t.is_multiple_of(k) || t == horizon,
            RecordMode::Summary => false,
        }
    }
}

impl fmt::Display for RecordMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordMode::Full => f.write_str("full"),
            RecordMode::Thin(k) => write!(f, "thin:{k}"),
            RecordMode::Summary => f.write_str("summary"),
        }
    }
}

impl FromStr for RecordMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "full" => Ok(RecordMode::Full),
            "summary" => Ok(RecordMode::Summary),
            other => {
                let k = other
                    .strip_prefix("thin:")
                    .and_then(|k| k.parse::<u64>().ok())
                    .filter(|k| *k >= 1)
                    .ok_or_else(|| {
                        format!("expected full, summary or thin:k with k >= 1, got `{other}`")
                    })?;
                Ok(RecordMode::Thin(k))
            }
        }
    }
}

/// Everything that determines a run.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub game: Arc<Game>,
    pub rules: Vec<RuleSpec>,
    pub horizon: u64,
    pub seed: u64,
    pub record: RecordMode,
}

impl SimConfig {
    pub fn new(game: Game, rules: Vec<RuleSpec>, horizon: u64, seed: u64) -> Self {
        Self {
            game: Arc::new(game),
            rules,
            horizon,
            seed,
            record: RecordMode::Full,
        }
    }

    pub fn with_record(mut self, record: RecordMode) -> Self {
        self.record = record;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.horizon == 0 {
            return Err(EngineError::Config("horizon must be at least 1".into()));
        }
        if self.rules.len() != self.game.num_players() {
            return Err(EngineError::Config(format!(
                "{} rules for {} players",
                self.rules.len(),
                self.game.num_players()
            )));
        }
        if self.record == RecordMode::Thin(0) {
            return Err(EngineError::Config(
                "thinning interval must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Rule specs with per-player defaults resolved.
    pub fn resolved_rules(&self) -> Vec<RuleSpec> {
        self.rules
            .iter()
            .enumerate()
            .map(|(i, r)| r.resolved(&self.game, i))
            .collect()
    }

    /// Builds one rule per player with its own internal stream.
    pub fn build_rules(&self) -> Result<Vec<RuleInstance>, EngineError> {
        let streams = Streams::new(self.seed);
        self.rules
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let ctx = PlayerContext::for_class(spec.info_class(), &self.game, i);
                spec.build(ctx, streams.stream(Purpose::RuleInternal, i as u32))
                    .map_err(|source| EngineError::Rule { player: i, source })
            })
            .collect()
    }
}

/// A run in progress: a game, one rule per player and the action streams.
pub struct Simulation {
    game: Arc<Game>,
    rules: Vec<RuleInstance>,
    classes: Vec<InfoClass>,
    samplers: Vec<StreamRng>,
    horizon: u64,
    seed: u64,
    record: RecordMode,
}

impl Simulation {
    pub fn new(config: &SimConfig) -> Result<Self, EngineError> {
        config.validate()?;
        let rules = config.build_rules()?;
        for (i, (rule, spec)) in rules.iter().zip(&config.rules).enumerate() {
            if rule.info_class() != spec.info_class() {
                return Err(EngineError::Rule {
                    player: i,
                    source: RuleError::InfoClassMismatch {
                        rule: rule.name(),
                        expected: spec.info_class(),
                        found: rule.info_class(),
                    },
                });
            }
        }
        Self::from_rules(
            Arc::clone(&config.game),
            rules,
            config.horizon,
            config.seed,
            config.record,
        )
    }

    /// Runs caller-built rules; feedback follows each rule's declared class.
    pub fn from_rules(
        game: Arc<Game>,
        rules: Vec<RuleInstance>,
        horizon: u64,
        seed: u64,
        record: RecordMode,
    ) -> Result<Self, EngineError> {
        if horizon == 0 {
            return Err(EngineError::Config("horizon must be at least 1".into()));
        }
        if rules.len() != game.num_players() {
            return Err(EngineError::Config(format!(
                "{} rules for {} players",
                rules.len(),
                game.num_players()
            )));
        }
        if record == RecordMode::Thin(0) {
            return Err(EngineError::Config(
                "thinning interval must be at least 1".into(),
            ));
        }
        let streams = Streams::new(seed);
        let samplers = (0..rules.len())
            .map(|i| streams.stream(Purpose::ActionSampling, i as u32))
            .collect();
        let classes = rules.iter().map(|r| r.info_class()).collect();
        Ok(Self {
            game,
            rules,
            classes,
            samplers,
            horizon,
            seed,
            record,
        })
    }

    pub fn run(mut self) -> Result<Trace, EngineError> {
        let n = self.game.num_players();
        let mut trace = Trace::new(
            Arc::clone(&self.game),
            self.horizon,
            self.seed,
            self.record,
            self.rules.iter().map(|r| r.describe()).collect(),
        );
        let mut profile = PureProfile(vec![0usize; n]);
        let mut moods = Vec::with_capacity(n);
        let mut pending = Vec::new();
        for t in 1..=self.horizon {
            for (i, rule) in self.rules.iter_mut().enumerate() {
                let x = rule.strategy(t);
                debug_assert!(
                    x.is_valid(),
                    "player {i} emitted an invalid mixed action at t={t}"
                );
                profile.0[i] = x.sample(&mut self.samplers[i]);
            }
            let keep = self.record.keeps(t, self.horizon);
            if keep {
                moods.clear();
                moods.extend(self.rules.iter().map(|r| r.mood()));
            }
            let index = self.game.index_unchecked(&profile.0);
            for (i, rule) in self.rules.iter_mut().enumerate() {
                let feedback = match self.classes[i] {
                    InfoClass::Uncoupled => Feedback::Uncoupled {
                        profile: &profile,
                        index,
                    },
                    InfoClass::CompletelyUncoupled => Feedback::CompletelyUncoupled {
                        own_action: profile.0[i],
                        own_payoff: self.game.payoff_at(index, i),
                    },
                };
                rule.observe(t, &feedback)
                    .map_err(|source| EngineError::Rule { player: i, source })?;
                rule.drain_events(&mut pending);
                trace.push_events(t, i, &mut pending);
            }
            trace.push_period(t, index, keep.then_some(&moods));
        }
        Ok(trace)
    }
}

/// Builds and runs `config`.
pub fn run(config: &SimConfig) -> Result<Trace, EngineError> {
    Simulation::new(config)?.run()
}
