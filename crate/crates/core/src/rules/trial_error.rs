//! Trial-and-Error learning: a four-mood state machine driven only by own
//! actions and realized payoffs.

use std::fmt;

use rand::Rng;

use crate::games::MixedAction;
use crate::rng::StreamRng;

use super::{bad_param, mismatch, Feedback, InfoClass, PlayerContext, Rule, RuleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mood {
    Content,
    Watchful,
    Hopeful,
    Discontent,
}

impl Mood {
    pub fn symbol(self) -> char {
        match self {
            Mood::Content => 'c',
            Mood::Watchful => 'w',
            Mood::Hopeful => 'h',
            Mood::Discontent => 'd',
        }
    }
}

impl fmt::Display for Mood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Mood plus benchmark action and benchmark payoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoodState {
    pub mood: Mood,
    pub benchmark_action: usize,
    pub benchmark_payoff: f64,
}

impl MoodState {
    pub fn new(mood: Mood, benchmark_action: usize, benchmark_payoff: f64) -> Self {
        Self {
            mood,
            benchmark_action,
            benchmark_payoff,
        }
    }
}

/// Acceptance probability `clamp(p*a - q*b + c, lo, hi)` of a discontent
/// player who drew payoff `a` against benchmark `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiFunction {
    p: f64,
    q: f64,
    c: f64,
    lo: f64,
    hi: f64,
}

impl PhiFunction {
    pub fn new(p: f64, q: f64, c: f64, lo: f64, hi: f64) -> Result<Self, RuleError> {
        let bad = |reason: String| bad_param(TrialAndError::NAME, "phi", reason);
        if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
            return Err(bad(format!("need p > 0 and q > 0, got p={p}, q={q}")));
        }
        if !c.is_finite() {
            return Err(bad(format!("offset must be finite, got {c}")));
        }
        if !(lo > 0.0 && lo <= hi && hi < 1.0) {
            return Err(bad(format!("need 0 < lo <= hi < 1, got lo={lo}, hi={hi}")));
        }
        Ok(Self { p, q, c, lo, hi })
    }

    pub fn eval(&self, a: f64, b: f64) -> f64 {
        (self.p * a - self.q * b + self.c).clamp(self.lo, self.hi)
    }

    pub fn coefficients(&self) -> [f64; 5] {
        [self.p, self.q, self.c, self.lo, self.hi]
    }
}

impl fmt::Display for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.p, self.q, self.c, self.lo, self.hi
        )
    }
}

/// Result of one state update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transition {
    To(MoodState),
    /// Move to `accept` with probability `prob`, else to `reject`.
    Accept {
        prob: f64,
        accept: MoodState,
        reject: MoodState,
    },
}

/// State update after playing `action` and receiving `payoff`. Payoffs are
/// compared exactly.
pub fn transition(state: &MoodState, action: usize, payoff: f64, phi: &PhiFunction) -> Transition {
    use std::cmp::Ordering::*;
    use Mood::*;
    let (bench_a, bench_p) = (state.benchmark_action, state.benchmark_payoff);
    let keep = |mood| Transition::To(MoodState::new(mood, bench_a, bench_p));
    let order = payoff.partial_cmp(&bench_p).expect("payoffs are finite");
    match state.mood {
        Content if action != bench_a => match order {
            Greater => Transition::To(MoodState::new(Content, action, payoff)),
            Less | Equal => keep(Content),
        },
        Content => match order {
            Less => keep(Watchful),
            Equal => keep(Content),
            Greater => keep(Hopeful),
        },
        Watchful => match order {
            Less => keep(Discontent),
            Equal => keep(Content),
            Greater => keep(Hopeful),
        },
        Hopeful => match order {
            Less => keep(Watchful),
            Equal => keep(Content),
            Greater => Transition::To(MoodState::new(Content, bench_a, payoff)),
        },
        Discontent => Transition::Accept {
            prob: phi.eval(payoff, bench_p),
            accept: MoodState::new(Content, action, payoff),
            reject: keep(Discontent).state(),
        },
    }
}

impl Transition {
    fn state(self) -> MoodState {
        match self {
            Transition::To(s) => s,
            Transition::Accept { reject, .. } => reject,
        }
    }
}

#[derive(Debug)]
pub struct TrialAndError {
    m: usize,
    eps: f64,
    phi: PhiFunction,
    // None until the first period has been observed
    state: Option<MoodState>,
    x: MixedAction,
    rng: StreamRng,
}

impl TrialAndError {
    pub const NAME: &'static str = "trial-error";
    pub const DEFAULT_EPS: f64 = 0.01;

    pub fn default_phi() -> PhiFunction {
        PhiFunction::new(0.6, 0.1, 0.05, 0.01, 0.99).expect("valid default")
    }

    pub fn new(
        ctx: PlayerContext,
        eps: f64,
        phi: PhiFunction,
        rng: StreamRng,
    ) -> Result<Self, RuleError> {
        let (_, m, _) = ctx.expect_payoff_only(Self::NAME)?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(bad_param(
                Self::NAME,
                "eps",
                format!("need 0 < eps < 1, got {eps}"),
            ));
        }
        Ok(Self {
            m,
            eps,
            phi,
            state: None,
            x: MixedAction::uniform(m),
            rng,
        })
    }

    pub fn state(&self) -> Option<&MoodState> {
        self.state.as_ref()
    }

    /// Starts from a given state instead of the uniform first period.
    pub fn with_state(mut self, state: MoodState) -> Self {
        assert!(
            state.benchmark_action < self.m,
            "benchmark action out of range"
        );
        self.state = Some(state);
        self.refresh();
        self
    }

    fn refresh(&mut self) {
        let Some(state) = self.state else { return };
        let probs = self.x.probs_mut();
        match state.mood {
            Mood::Content if self.m > 1 => {
                probs.fill(self.eps / (self.m - 1) as f64);
                probs[state.benchmark_action] = 1.0 - self.eps;
            }
            Mood::Discontent => probs.fill(1.0 / self.m as f64),
            _ => {
                probs.fill(0.0);
                probs[state.benchmark_action] = 1.0;
            }
        }
    }
}

impl Rule for TrialAndError {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn info_class(&self) -> InfoClass {
        InfoClass::CompletelyUncoupled
    }

    fn describe(&self) -> String {
        format!("{}[eps={},phi={}]", Self::NAME, self.eps, self.phi)
    }

    fn strategy(&mut self, _t: u64) -> &MixedAction {
        &self.x
    }

    fn observe(&mut self, _t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::CompletelyUncoupled {
            own_action,
            own_payoff,
        } = *feedback
        else {
            return Err(mismatch(
                Self::NAME,
                InfoClass::CompletelyUncoupled,
                feedback,
            ));
        };
        let next = match &self.state {
            None => MoodState::new(Mood::Content, own_action, own_payoff),
            Some(state) => match transition(state, own_action, own_payoff, &self.phi) {
                Transition::To(next) => next,
                Transition::Accept {
                    prob,
                    accept,
                    reject,
                } => {
                    if self.rng.random::<f64>() < prob {
                        accept
                    } else {
                        reject
                    }
                }
            },
        };
        self.state = Some(next);
        self.refresh();
        Ok(())
    }

    fn mood(&self) -> Option<Mood> {
        self.state.map(|s| s.mood)
    }
}
