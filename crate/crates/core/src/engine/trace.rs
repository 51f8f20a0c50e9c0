//! Recorded runs and the diagnostics computed from them.

use std::sync::Arc;

use crate::games::{Game, JointDistribution, MixedAction, PureProfile};
use crate::rules::{Mood, RuleEvent};

use super::{EngineError, RecordMode};

/// One recorded period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodRecord {
    pub t: u64,
    pub profile: PureProfile,
    pub payoffs: Vec<f64>,
    /// Mood of each player during the period, for rules that have one.
    pub moods: Vec<Option<Mood>>,
}

/// A rule event stamped with its period and player.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedEvent {
    pub t: u64,
    pub player: usize,
    pub event: RuleEvent,
}

/// Result of one run. Counts, absorption data and rule events cover every
/// period whatever the record mode; per-period records follow the mode.
#[derive(Debug, Clone)]
pub struct Trace {
    game: Arc<Game>,
    horizon: u64,
    seed: u64,
    mode: RecordMode,
    rules: Vec<String>,
    records: Vec<PeriodRecord>,
    // profile index of every period, kept only in full mode
    indices: Vec<usize>,
    counts: Vec<u64>,
    periods: u64,
    last: Option<usize>,
    constant_since: u64,
    events: Vec<TimedEvent>,
}

impl Trace {
    pub(super) fn new(
        game: Arc<Game>,
        horizon: u64,
        seed: u64,
        mode: RecordMode,
        rules: Vec<String>,
    ) -> Self {
        let counts = vec![0; game.num_profiles()];
        let cap = match mode {
            RecordMode::Full => horizon.min(1 << 24) as usize,
            _ => 0,
        };
        Self {
            game,
            horizon,
            seed,
            mode,
            rules,
            records: Vec::with_capacity(cap),
            indices: Vec::with_capacity(cap),
            counts,
            periods: 0,
            last: None,
            constant_since: 1,
            events: Vec::new(),
        }
    }

    pub(super) fn push_events(&mut self, t: u64, player: usize, pending: &mut Vec<RuleEvent>) {
        self.events.extend(
            pending
                .drain(..)
                .map(|event| TimedEvent { t, player, event }),
        );
    }

    pub(super) fn push_period(&mut self, t: u64, index: usize, moods: Option<&Vec<Option<Mood>>>) {
        self.counts[index] += 1;
        self.periods = t;
        if self.last != Some(index) {
            self.constant_since = t;
            self.last = Some(index);
        }
        if self.mode == RecordMode::Full {
            self.indices.push(index);
        }
        if let Some(moods) = moods {
            self.records.push(PeriodRecord {
                t,
                profile: self.game.profile_at(index),
                payoffs: self.game.payoffs_at(index).to_vec(),
                moods: moods.clone(),
            });
        }
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn record_mode(&self) -> RecordMode {
        self.mode
    }

    /// Resolved description of each player's rule.
    pub fn rules(&self) -> &[String] {
        &self.rules
    }

    /// Number of periods played.
    pub fn len(&self) -> u64 {
        self.periods
    }

    pub fn is_empty(&self) -> bool {
        self.periods == 0
    }

    pub fn records(&self) -> &[PeriodRecord] {
        &self.records
    }

    pub fn events(&self) -> &[TimedEvent] {
        &self.events
    }

    /// Visit counts of every profile over the whole run.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn final_profile(&self) -> Option<PureProfile> {
        self.last.map(|idx| self.game.profile_at(idx))
    }

    /// First period of the final constant stretch of play.
    pub fn constant_since(&self) -> u64 {
        self.constant_since
    }

    /// Profile index of every period; requires a full trace.
    pub fn profile_indices(&self) -> Result<&[usize], EngineError> {
        match self.mode {
            RecordMode::Full => Ok(&self.indices),
            _ => Err(EngineError::NeedsFullTrace("per-period profiles")),
        }
    }

    fn check_t(&self, t: u64) -> Result<(), EngineError> {
        if t == 0 || t > self.periods {
            return Err(EngineError::PeriodOutOfRange {
                t,
                len: self.periods,
            });
        }
        Ok(())
    }

    /// Empirical joint distribution of the first `t` periods.
    pub fn empirical_joint(&self, t: u64) -> Result<JointDistribution, EngineError> {
        self.check_t(t)?;
        if t == self.periods {
            return Ok(JointDistribution::from_counts(&self.counts));
        }
        let indices = self
            .profile_indices()
            .map_err(|_| EngineError::NeedsFullTrace("a joint before the last period"))?;
        let mut counts = vec![0u64; self.game.num_profiles()];
        for &idx in &indices[..t as usize] {
            counts[idx] += 1;
        }
        Ok(JointDistribution::from_counts(&counts))
    }

    /// Empirical frequencies of player `i`'s actions over the first `t` periods.
    pub fn empirical_marginal(&self, i: usize, t: u64) -> Result<MixedAction, EngineError> {
        self.game.check_player(i)?;
        Ok(self.empirical_joint(t)?.marginal(&self.game, i))
    }

    /// Distributions over windows of `window` periods, one every `stride` periods.
    /// Each entry carries the window's last period.
    pub fn moving_window_distribution(
        &self,
        window: u64,
        stride: u64,
    ) -> Result<Vec<(u64, JointDistribution)>, EngineError> {
        if window == 0 || stride == 0 {
            return Err(EngineError::Config(
                "window and stride must be at least 1".into(),
            ));
        }
        let indices = self.profile_indices()?;
        let len = indices.len() as u64;
        if window > len {
            return Err(EngineError::WindowTooLong { window, len });
        }
        let w = window as usize;
        let mut counts = vec![0u64; self.game.num_profiles()];
        for &idx in &indices[..w] {
            counts[idx] += 1;
        }
        let mut out = vec![(window, JointDistribution::from_counts(&counts))];
        let mut end = w;
        while end + stride as usize <= indices.len() {
            for k in end..end + stride as usize {
                counts[indices[k]] += 1;
                counts[indices[k - w]] -= 1;
            }
            end += stride as usize;
            out.push((end as u64, JointDistribution::from_counts(&counts)));
        }
        Ok(out)
    }

    /// Cumulative empirical joint every `stride` periods (and at the end).
    pub fn cumulative_series(
        &self,
        stride: u64,
    ) -> Result<Vec<(u64, JointDistribution)>, EngineError> {
        if stride == 0 {
            return Err(EngineError::Config("stride must be at least 1".into()));
        }
        let indices = self.profile_indices()?;
        let mut counts = vec![0u64; self.game.num_profiles()];
        let mut out = Vec::new();
        for (k, &idx) in indices.iter().enumerate() {
            counts[idx] += 1;
            let t = k as u64 + 1;
            if t.is_multiple_of(stride) || t == indices.len() as u64 {
                out.push((t, JointDistribution::from_counts(&counts)));
            }
        }
        Ok(out)
    }

    /// Fraction of all periods whose profile satisfies `pred`.
    pub fn frequency_in<F: Fn(&PureProfile) -> bool>(&self, pred: F) -> f64 {
        let hits: u64 = self
            .counts
            .iter()
            .enumerate()
            .filter(|(idx, c)| **c > 0 && pred(&self.game.profile_at(*idx)))
            .map(|(_, c)| *c)
            .sum();
        hits as f64 / self.periods as f64
    }

    /// Fraction of periods spent at `profile`.
    pub fn frequency_of(&self, profile: &PureProfile) -> Result<f64, EngineError> {
        let idx = self.game.index_of(profile)?;
        Ok(self.counts[idx] as f64 / self.periods as f64)
    }

    /// `min_ce_eps` of the empirical joint over the whole run.
    pub fn min_ce_eps(&self) -> f64 {
        self.game
            .min_ce_eps(&JointDistribution::from_counts(&self.counts))
            .expect("counts match the game")
    }
}
