//! Regret bookkeeping: cumulative and internal regret tallies, the
//! payoff-only estimator of average internal regret, and frame regrets.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::games::{Game, MixedAction, PureProfile};

/// Probability components below this are rejected by the importance-weighted estimator.
pub const ESTIMATOR_PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegretError {
    #[error("no periods recorded yet")]
    Empty,
    #[error("mixed action component {prob} at action {action} is below the estimator floor {ESTIMATOR_PROB_FLOOR}")]
    ProbabilityTooSmall { action: usize, prob: f64 },
    #[error("exploration needs g*m < T, got g={g}, m={m}, T={frame_len}")]
    SamplerCapacity { g: usize, m: usize, frame_len: u64 },
    #[error(
        "frame schedule has {found} exploration slots for action {action}, expected {expected}"
    )]
    BadSchedule {
        action: usize,
        expected: usize,
        found: usize,
    },
    #[error("action {action} out of range for {m} actions")]
    ActionOutOfRange { action: usize, m: usize },
}

/// Cumulative and internal regret of one player, updated in O(m) per period.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTally {
    player: usize,
    m: usize,
    periods: u64,
    // sum over periods of pi_i(k, s_-i)
    alternative: Vec<f64>,
    realized: f64,
    // internal[j * m + k]: gain from having played k whenever j was played
    internal: Vec<f64>,
}

impl RegretTally {
    pub fn new(game: &Game, player: usize) -> Self {
        let m = game.num_actions(player);
        Self {
            player,
            m,
            periods: 0,
            alternative: vec![0.0; m],
            realized: 0.0,
            internal: vec![0.0; m * m],
        }
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn periods(&self) -> u64 {
        self.periods
    }

    pub fn update(&mut self, game: &Game, s: &PureProfile) {
        let idx = game.index_of(s).expect("profile valid for game");
        self.update_index(game, idx);
    }

    /// Update from the index of the realized profile.
    pub fn update_index(&mut self, game: &Game, idx: usize) {
        let i = self.player;
        let j = game.action_at(idx, i);
        let own = game.payoff_at(idx, i);
        self.realized += own;
        let row = &mut self.internal[j * self.m..(j + 1) * self.m];
        for (k, (alt, r)) in self.alternative.iter_mut().zip(row).enumerate() {
            let v = game.payoff_at(game.deviate_index(idx, i, k), i);
            *alt += v;
            *r += v - own;
        }
        self.periods += 1;
    }

    /// `r_{t,k}`: cumulative regret for never having deviated to `k`.
    pub fn cumulative(&self, k: usize) -> f64 {
        self.alternative[k] - self.realized
    }

    pub fn cumulative_vec(&self) -> Vec<f64> {
        (0..self.m).map(|k| self.cumulative(k)).collect()
    }

    /// `R^int(j, k)`.
    pub fn internal(&self, j: usize, k: usize) -> f64 {
        self.internal[j * self.m + k]
    }

    pub fn avg_internal(&self, j: usize, k: usize) -> Result<f64, RegretError> {
        if self.periods == 0 {
            return Err(RegretError::Empty);
        }
        Ok(self.internal(j, k) / self.periods as f64)
    }

    pub fn num_actions(&self) -> usize {
        self.m
    }
}

/// Payoff-only estimate of average internal regret, built from own actions,
/// own realized payoffs, and the mixed actions that generated them.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedTally {
    m: usize,
    periods: u64,
    // weighted[j * m + k] = sum over periods with s_i = k of x_j / x_k * payoff
    weighted: Vec<f64>,
    // own[j] = sum over periods with s_i = j of payoff
    own: Vec<f64>,
}

impl EstimatedTally {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            periods: 0,
            weighted: vec![0.0; m * m],
            own: vec![0.0; m],
        }
    }

    pub fn periods(&self) -> u64 {
        self.periods
    }

    pub fn update(
        &mut self,
        played: usize,
        payoff: f64,
        x: &MixedAction,
    ) -> Result<(), RegretError> {
        if played >= self.m || x.len() != self.m {
            return Err(RegretError::ActionOutOfRange {
                action: played,
                m: self.m,
            });
        }
        let probs = x.probs();
        if let Some((action, &prob)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| **p < ESTIMATOR_PROB_FLOOR)
        {
            return Err(RegretError::ProbabilityTooSmall { action, prob });
        }
        let xk = probs[played];
        for j in 0..self.m {
            self.weighted[j * self.m + played] += probs[j] / xk * payoff;
        }
        self.own[played] += payoff;
        self.periods += 1;
        Ok(())
    }

    /// Estimated average internal regret for switching from `j` to `k`.
    pub fn estimate(&self, j: usize, k: usize) -> Result<f64, RegretError> {
        if self.periods == 0 {
            return Err(RegretError::Empty);
        }
        if j == k {
            return Ok(0.0);
        }
        Ok((self.weighted[j * self.m + k] - self.own[j]) / self.periods as f64)
    }
}

/// Average regret of player `i` over a frame, one entry per action `k`:
/// `(1/T) sum (pi_i(k, s_-i) - pi_i(s))`.
pub fn frame_avg_regret(
    game: &Game,
    i: usize,
    frame: &[PureProfile],
) -> Result<Vec<f64>, RegretError> {
    if frame.is_empty() {
        return Err(RegretError::Empty);
    }
    let mut acc = FrameRegret::new(game.num_actions(i));
    for s in frame {
        acc.record(game, i, game.index_of(s).expect("profile valid for game"));
    }
    Ok(acc.average())
}

/// Running sums behind [`frame_avg_regret`], for rules that see one period at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRegret {
    alternative: Vec<f64>,
    realized: f64,
    len: u64,
}

impl FrameRegret {
    pub fn new(m: usize) -> Self {
        Self {
            alternative: vec![0.0; m],
            realized: 0.0,
            len: 0,
        }
    }

    #[inline]
    pub fn record(&mut self, game: &Game, i: usize, idx: usize) {
        self.realized += game.payoff_at(idx, i);
        for (k, alt) in self.alternative.iter_mut().enumerate() {
            *alt += game.payoff_at(game.deviate_index(idx, i, k), i);
        }
        self.len += 1;
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn average(&self) -> Vec<f64> {
        let t = self.len as f64;
        self.alternative
            .iter()
            .map(|a| (a - self.realized) / t)
            .collect()
    }

    pub fn reset(&mut self) {
        self.alternative.iter_mut().for_each(|a| *a = 0.0);
        self.realized = 0.0;
        self.len = 0;
    }
}

/// Exploration schedule of one frame: exactly `g` periods forced to each
/// action, all configurations equally likely; the rest follow the mixed action.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSampler {
    frame_len: u64,
    per_action: usize,
    m: usize,
    // (period within frame, forced action), sorted by period
    slots: Vec<(u64, usize)>,
}

impl FrameSampler {
    pub fn new(frame_len: u64, per_action: usize, m: usize) -> Result<Self, RegretError> {
        let explore = (per_action as u64).checked_mul(m as u64);
        if per_action == 0 || explore.is_none_or(|e| e >= frame_len) {
            return Err(RegretError::SamplerCapacity {
                g: per_action,
                m,
                frame_len,
            });
        }
        Ok(Self {
            frame_len,
            per_action,
            m,
            slots: Vec::new(),
        })
    }

    pub fn frame_len(&self) -> u64 {
        self.frame_len
    }

    pub fn per_action(&self) -> usize {
        self.per_action
    }

    /// Draws a fresh schedule: `g*m` distinct positions, then a shuffled
    /// assignment of `g` copies of each action to them.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let total = self.per_action * self.m;
        let mut labels: Vec<usize> = (0..self.m)
            .flat_map(|h| std::iter::repeat_n(h, self.per_action))
            .collect();
        labels.shuffle(rng);
        let len = usize::try_from(self.frame_len).expect("frame length fits in usize");
        let positions = index::sample(rng, len, total);
        self.slots = positions
            .into_iter()
            .map(|p| p as u64)
            .zip(labels)
            .collect();
        self.slots.sort_unstable();
    }

    /// The forced action at period `tau` (0-based within the frame), if any.
    pub fn forced(&self, tau: u64) -> Option<usize> {
        self.slots
            .binary_search_by_key(&tau, |(p, _)| *p)
            .ok()
            .map(|k| self.slots[k].1)
    }

    pub fn slots(&self) -> &[(u64, usize)] {
        &self.slots
    }
}

/// Estimated frame regret from own realized payoffs only. Each entry of
/// `frame` is the period's forced action (`None` for a free period) and the
/// realized own payoff.
pub fn estimated_frame_regret(
    m: usize,
    per_action: usize,
    frame: &[(Option<usize>, f64)],
) -> Result<Vec<f64>, RegretError> {
    let mut acc = EstimatedFrameRegret::new(m, per_action, frame.len() as u64)?;
    for &(slot, payoff) in frame {
        acc.record(slot, payoff)?;
    }
    acc.estimate()
}

/// Running sums behind [`estimated_frame_regret`].
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedFrameRegret {
    per_action: usize,
    frame_len: u64,
    forced_sum: Vec<f64>,
    forced_count: Vec<usize>,
    free_sum: f64,
}

impl EstimatedFrameRegret {
    pub fn new(m: usize, per_action: usize, frame_len: u64) -> Result<Self, RegretError> {
        FrameSampler::new(frame_len, per_action, m)?;
        Ok(Self {
            per_action,
            frame_len,
            forced_sum: vec![0.0; m],
            forced_count: vec![0; m],
            free_sum: 0.0,
        })
    }

    pub fn record(&mut self, slot: Option<usize>, payoff: f64) -> Result<(), RegretError> {
        match slot {
            Some(h) if h >= self.forced_sum.len() => {
                return Err(RegretError::ActionOutOfRange {
                    action: h,
                    m: self.forced_sum.len(),
                })
            }
            Some(h) => {
                self.forced_sum[h] += payoff;
                self.forced_count[h] += 1;
            }
            None => self.free_sum += payoff,
        }
        Ok(())
    }

    pub fn estimate(&self) -> Result<Vec<f64>, RegretError> {
        if let Some((action, &found)) = self
            .forced_count
            .iter()
            .enumerate()
            .find(|(_, c)| **c != self.per_action)
        {
            return Err(RegretError::BadSchedule {
                action,
                expected: self.per_action,
                found,
            });
        }
        let m = self.forced_sum.len();
        let free = (self.frame_len - (m * self.per_action) as u64) as f64;
        let base = self.free_sum / free;
        Ok(self
            .forced_sum
            .iter()
            .map(|s| s / self.per_action as f64 - base)
            .collect())
    }

    pub fn reset(&mut self) {
        self.forced_sum.iter_mut().for_each(|s| *s = 0.0);
        self.forced_count.iter_mut().for_each(|c| *c = 0);
        self.free_sum = 0.0;
    }
}
