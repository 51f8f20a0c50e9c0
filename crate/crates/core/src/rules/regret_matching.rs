//! Regret Matching and its payoff-only variant.

use crate::games::MixedAction;
use crate::regret::{EstimatedTally, RegretTally};
use crate::rng::StreamRng;

use super::{bad_param, mismatch, Feedback, InfoClass, OwnPayoffs, PlayerContext, Rule, RuleError};

/// Regret matching: 2.5% above the admissible minimum `2 M (m - 1)`, or 1
/// when every payoff is zero.
pub fn default_mu(bound: f64, m: usize) -> f64 {
    let min = 2.0 * bound * (m as f64 - 1.0);
    if min > 0.0 {
        min * 1.025
    } else {
        1.0
    }
}

/// Modified regret matching: `2 M m + 1`.
pub fn default_modified_mu(bound: f64, m: usize) -> f64 {
    2.0 * bound * m as f64 + 1.0
}

/// Switches away from the last action with probability proportional to the
/// positive part of its average internal regret.
#[derive(Debug)]
pub struct RegretMatching {
    own: OwnPayoffs,
    mu: f64,
    stay_floor: f64,
    tally: RegretTally,
    x: MixedAction,
}

impl RegretMatching {
    pub const NAME: &'static str = "regret-matching";

    /// `mu = None` picks the default. Requires `mu > 2 M (m - 1)`.
    pub fn new(
        ctx: PlayerContext,
        mu: Option<f64>,
        rng: &mut StreamRng,
    ) -> Result<Self, RuleError> {
        let own = ctx.expect_uncoupled(Self::NAME)?;
        let (m, bound) = (own.num_actions(), own.bound());
        let mu = mu.unwrap_or_else(|| default_mu(bound, m));
        let min = 2.0 * bound * (m as f64 - 1.0);
        if !(mu.is_finite() && mu > min) {
            return Err(bad_param(
                Self::NAME,
                "mu",
                format!("need mu > 2*M*(m-1) = {min}, got {mu}"),
            ));
        }
        let tally = RegretTally::new(own.game(), own.player());
        Ok(Self {
            stay_floor: 1.0 - (m as f64 - 1.0) * 2.0 * bound / mu,
            mu,
            tally,
            x: MixedAction::random_uniform(m, rng),
            own,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn tally(&self) -> &RegretTally {
        &self.tally
    }
}

impl Rule for RegretMatching {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn info_class(&self) -> InfoClass {
        InfoClass::Uncoupled
    }

    fn describe(&self) -> String {
        format!("{}[mu={}]", Self::NAME, self.mu)
    }

    fn strategy(&mut self, _t: u64) -> &MixedAction {
        &self.x
    }

    fn observe(&mut self, _t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::Uncoupled { index, .. } = *feedback else {
            return Err(mismatch(Self::NAME, InfoClass::Uncoupled, feedback));
        };
        self.tally.update_index(self.own.game(), index);
        let j = self.own.own_action(index);
        let t = self.tally.periods() as f64;
        let probs = self.x.probs_mut();
        let mut moved = 0.0;
        for (k, p) in probs.iter_mut().enumerate() {
            if k != j {
                *p = (self.tally.internal(j, k) / t).max(0.0) / self.mu;
                moved += *p;
            }
        }
        probs[j] = 1.0 - moved;
        assert!(
            probs[j] >= self.stay_floor - 1e-12,
            "stay probability {} below floor {}",
            probs[j],
            self.stay_floor
        );
        Ok(())
    }
}

/// Payoff-only Regret Matching: internal regrets are estimated by
/// importance weighting, and every off action keeps an exploration floor.
#[derive(Debug)]
pub struct ModifiedRegretMatching {
    m: usize,
    mu: f64,
    gamma: f64,
    delta: f64,
    tally: EstimatedTally,
    x: MixedAction,
}

impl ModifiedRegretMatching {
    pub const NAME: &'static str = "modified-rm";
    pub const DEFAULT_GAMMA: f64 = 0.2;
    pub const DEFAULT_DELTA: f64 = 0.5;

    pub fn new(
        ctx: PlayerContext,
        gamma: f64,
        delta: f64,
        mu: Option<f64>,
        rng: &mut StreamRng,
    ) -> Result<Self, RuleError> {
        let (_, m, bound) = ctx.expect_payoff_only(Self::NAME)?;
        if !(gamma > 0.0 && gamma < 0.25) {
            return Err(bad_param(
                Self::NAME,
                "gamma",
                format!("need 0 < gamma < 1/4, got {gamma}"),
            ));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(bad_param(
                Self::NAME,
                "delta",
                format!("need 0 < delta <= 1, got {delta}"),
            ));
        }
        let mu = mu.unwrap_or_else(|| default_modified_mu(bound, m));
        let min = 2.0 * bound * m as f64;
        if !(mu.is_finite() && mu > min) {
            return Err(bad_param(
                Self::NAME,
                "mu",
                format!("need mu > 2*M*m = {min}, got {mu}"),
            ));
        }
        Ok(Self {
            m,
            mu,
            gamma,
            delta,
            tally: EstimatedTally::new(m),
            x: MixedAction::random_uniform(m, rng),
        })
    }

    /// Exploration floor on each off action after `t` observed periods.
    pub fn floor(&self, t: u64) -> f64 {
        self.delta / (self.m as f64 * (t as f64).powf(self.gamma))
    }

    pub fn tally(&self) -> &EstimatedTally {
        &self.tally
    }
}

impl Rule for ModifiedRegretMatching {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn info_class(&self) -> InfoClass {
        InfoClass::CompletelyUncoupled
    }

    fn describe(&self) -> String {
        format!(
            "{}[gamma={},delta={},mu={}]",
            Self::NAME,
            self.gamma,
            self.delta,
            self.mu
        )
    }

    fn strategy(&mut self, _t: u64) -> &MixedAction {
        &self.x
    }

    fn observe(&mut self, _t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::CompletelyUncoupled {
            own_action: j,
            own_payoff,
        } = *feedback
        else {
            return Err(mismatch(
                Self::NAME,
                InfoClass::CompletelyUncoupled,
                feedback,
            ));
        };
        self.tally.update(j, own_payoff, &self.x)?;
        let t = self.tally.periods();
        let floor = self.floor(t);
        let shrink = 1.0 - floor * self.m as f64;
        let cap = 1.0 / self.m as f64;
        let mut moved = 0.0;
        let mut next = vec![0.0; self.m];
        for (k, p) in next.iter_mut().enumerate() {
            if k != j {
                *p = shrink * (self.tally.estimate(j, k)?.max(0.0) / self.mu).min(cap) + floor;
                moved += *p;
            }
        }
        next[j] = 1.0 - moved;
        self.x.probs_mut().copy_from_slice(&next);
        Ok(())
    }
}
