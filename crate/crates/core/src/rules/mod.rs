//! Learning rules behind one interface.
//!
//! Every rule declares an [`InfoClass`]. Uncoupled rules are built with a view
//! of their own payoff function and observe whole realized profiles;
//! completely uncoupled rules are built knowing only their action count and
//! a payoff bound, and observe only their own action and realized payoff.
//! The engine asks each rule for its mixed action, samples the pure action,
//! and reports back the feedback the rule's class allows.

mod fictitious;
mod pure;
mod regret_matching;
mod regret_testing;
mod spec;
mod trial_error;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::games::{Game, MixedAction, PureProfile};
use crate::regret::RegretError;

pub use fictitious::FictitiousPlay;
pub use pure::{SimplePure, TwoRecall};
pub use regret_matching::{
    default_modified_mu, default_mu, ModifiedRegretMatching, RegretMatching,
};
pub use regret_testing::{
    ert_decision, local_redraw, Alert, AlertSchedule, ExperimentalRegretTesting, PayoffAlert,
    LOCAL_REDRAW_ATTEMPTS,
};
pub use spec::{parse_rule_list, split_rule_list, RuleSpec, RULE_NAMES};
pub use trial_error::{transition, Mood, MoodState, PhiFunction, Transition, TrialAndError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuleError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{rule}`: bad parameter `{key}`: {reason}")]
    BadParameter {
        rule: String,
        key: String,
        reason: String,
    },
    #[error("rule `{rule}` is {expected} but was given {found} information")]
    InfoClassMismatch {
        rule: &'static str,
        expected: InfoClass,
        found: InfoClass,
    },
    #[error("ALERT schedule overflows at regime {0}")]
    ScheduleOverflow(u32),
    #[error(transparent)]
    Regret(#[from] RegretError),
}

/// What a player may observe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfoClass {
    /// Own payoff function plus everyone's realized actions.
    Uncoupled,
    /// Own realized actions and payoffs only.
    CompletelyUncoupled,
}

impl fmt::Display for InfoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfoClass::Uncoupled => "uncoupled",
            InfoClass::CompletelyUncoupled => "completely uncoupled",
        })
    }
}

/// One period's observation, shaped by the receiving rule's class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feedback<'a> {
    Uncoupled {
        profile: &'a PureProfile,
        index: usize,
    },
    CompletelyUncoupled {
        own_action: usize,
        own_payoff: f64,
    },
}

impl Feedback<'_> {
    pub fn class(&self) -> InfoClass {
        match self {
            Feedback::Uncoupled { .. } => InfoClass::Uncoupled,
            Feedback::CompletelyUncoupled { .. } => InfoClass::CompletelyUncoupled,
        }
    }
}

/// Player `i`'s own payoff function, the only part of the game an uncoupled rule sees.
#[derive(Debug, Clone)]
pub struct OwnPayoffs {
    game: Arc<Game>,
    player: usize,
}

impl OwnPayoffs {
    pub fn new(game: Arc<Game>, player: usize) -> Self {
        assert!(player < game.num_players(), "player out of range");
        Self { game, player }
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn num_actions(&self) -> usize {
        self.game.num_actions(self.player)
    }

    pub fn bound(&self) -> f64 {
        self.game.payoff_bound(self.player)
    }

    /// Own payoff at the profile with index `idx`.
    #[inline]
    pub fn realized(&self, idx: usize) -> f64 {
        self.game.payoff_at(idx, self.player)
    }

    /// Own payoff had the player used `action` against the others in `idx`.
    #[inline]
    pub fn against(&self, action: usize, idx: usize) -> f64 {
        self.game.payoff_at(
            self.game.deviate_index(idx, self.player, action),
            self.player,
        )
    }

    /// Own action in the profile with index `idx`.
    #[inline]
    pub fn own_action(&self, idx: usize) -> usize {
        self.game.action_at(idx, self.player)
    }

    /// Whether the own action in `idx` is a best reply to the others.
    pub fn is_best_reply(&self, idx: usize) -> bool {
        let own = self.realized(idx);
        (0..self.num_actions()).all(|k| own >= self.against(k, idx))
    }

    pub(crate) fn game(&self) -> &Game {
        &self.game
    }
}

/// What a rule is told about its player at construction.
#[derive(Debug, Clone)]
pub enum PlayerContext {
    Uncoupled(OwnPayoffs),
    CompletelyUncoupled {
        player: usize,
        num_actions: usize,
        payoff_bound: f64,
    },
}

impl PlayerContext {
    pub fn for_class(class: InfoClass, game: &Arc<Game>, player: usize) -> Self {
        match class {
            InfoClass::Uncoupled => {
                PlayerContext::Uncoupled(OwnPayoffs::new(Arc::clone(game), player))
            }
            InfoClass::CompletelyUncoupled => PlayerContext::CompletelyUncoupled {
                player,
                num_actions: game.num_actions(player),
                payoff_bound: game.payoff_bound(player),
            },
        }
    }

    pub fn class(&self) -> InfoClass {
        match self {
            PlayerContext::Uncoupled(_) => InfoClass::Uncoupled,
            PlayerContext::CompletelyUncoupled { .. } => InfoClass::CompletelyUncoupled,
        }
    }

    pub fn player(&self) -> usize {
        match self {
            PlayerContext::Uncoupled(own) => own.player(),
            PlayerContext::CompletelyUncoupled { player, .. } => *player,
        }
    }

    pub fn num_actions(&self) -> usize {
        match self {
            PlayerContext::Uncoupled(own) => own.num_actions(),
            PlayerContext::CompletelyUncoupled { num_actions, .. } => *num_actions,
        }
    }

    pub fn payoff_bound(&self) -> f64 {
        match self {
            PlayerContext::Uncoupled(own) => own.bound(),
            PlayerContext::CompletelyUncoupled { payoff_bound, .. } => *payoff_bound,
        }
    }

    pub(crate) fn expect_uncoupled(self, rule: &'static str) -> Result<OwnPayoffs, RuleError> {
        match self {
            PlayerContext::Uncoupled(own) => Ok(own),
            other => Err(RuleError::InfoClassMismatch {
                rule,
                expected: InfoClass::Uncoupled,
                found: other.class(),
            }),
        }
    }

    pub(crate) fn expect_payoff_only(
        self,
        rule: &'static str,
    ) -> Result<(usize, usize, f64), RuleError> {
        match self {
            PlayerContext::CompletelyUncoupled {
                player,
                num_actions,
                payoff_bound,
            } => Ok((player, num_actions, payoff_bound)),
            other => Err(RuleError::InfoClassMismatch {
                rule,
                expected: InfoClass::CompletelyUncoupled,
                found: other.class(),
            }),
        }
    }
}

/// What a frame-based rule did at the end of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameDecision {
    Keep,
    /// Regret at or above the threshold forced a uniform redraw.
    RegretRedraw,
    /// Low regret, but the small-probability uniform redraw fired.
    LambdaRedraw,
    /// Middle band after an earlier uniform redraw in the same regime.
    MiddleBandRedraw,
    /// Middle band: redraw near the regime-entry action.
    LocalRedraw,
}

impl FrameDecision {
    pub fn is_redraw(self) -> bool {
        self != FrameDecision::Keep
    }

    pub fn label(self) -> &'static str {
        match self {
            FrameDecision::Keep => "keep",
            FrameDecision::RegretRedraw => "regret",
            FrameDecision::LambdaRedraw => "lambda",
            FrameDecision::MiddleBandRedraw => "middle-global",
            FrameDecision::LocalRedraw => "local",
        }
    }
}

/// Instrumentation emitted by rules.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleEvent {
    FrameEnd {
        frame: u64,
        regime: Option<u32>,
        strategy: Vec<f64>,
        regrets: Vec<f64>,
        decision: FrameDecision,
    },
    RegimeStart {
        regime: u32,
        frame_len: u64,
        frames: u64,
    },
    Frozen {
        action: usize,
    },
}

/// A player's learning rule with its private state.
pub trait Rule: Send {
    fn name(&self) -> &'static str;

    fn info_class(&self) -> InfoClass;

    /// Parameters with defaults resolved.
    fn describe(&self) -> String;

    /// Mixed action for period `t` (1-based), given everything observed before `t`.
    fn strategy(&mut self, t: u64) -> &MixedAction;

    /// Observation of period `t`. Feedback of the wrong class is rejected.
    fn observe(&mut self, t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError>;

    fn mood(&self) -> Option<Mood> {
        None
    }

    /// Moves pending instrumentation events into `out`.
    fn drain_events(&mut self, _out: &mut Vec<RuleEvent>) {}
}

pub type RuleInstance = Box<dyn Rule>;

pub(crate) fn mismatch(
    rule: &'static str,
    expected: InfoClass,
    feedback: &Feedback<'_>,
) -> RuleError {
    RuleError::InfoClassMismatch {
        rule,
        expected,
        found: feedback.class(),
    }
}

pub(crate) fn bad_param(rule: &str, key: &str, reason: impl Into<String>) -> RuleError {
    RuleError::BadParameter {
        rule: rule.to_string(),
        key: key.to_string(),
        reason: reason.into(),
    }
}
