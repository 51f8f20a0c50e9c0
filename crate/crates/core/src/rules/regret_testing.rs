//! Regret testing: Experimental Regret Testing, ALERT and payoff-based ALERT.
//!
//! Time is cut into frames. A player holds one mixed action for a whole
//! frame, plays i.i.d. draws from it, and at the end of the frame decides
//! from the frame's average regrets whether to keep it or redraw.

use rand::Rng;

use crate::games::MixedAction;
use crate::regret::{EstimatedFrameRegret, FrameRegret, FrameSampler};
use crate::rng::StreamRng;

use super::{
    bad_param, mismatch, Feedback, FrameDecision, InfoClass, OwnPayoffs, PlayerContext, Rule,
    RuleError, RuleEvent,
};

/// Rejection attempts before a local redraw falls back to shrinking toward the center.
pub const LOCAL_REDRAW_ATTEMPTS: usize = 100;

fn ceil_tol(x: f64) -> f64 {
    // keeps integers computed through logs from rounding up a step
    if (x - x.round()).abs() <= 1e-9 {
        x.round()
    } else {
        x.ceil()
    }
}

/// End-of-frame rule of Experimental Regret Testing. `u` is a uniform draw on `[0,1)`.
pub fn ert_decision(regrets: &[f64], threshold: f64, lambda: f64, u: f64) -> FrameDecision {
    if regrets.iter().any(|r| *r >= threshold) {
        FrameDecision::RegretRedraw
    } else if u < lambda {
        FrameDecision::LambdaRedraw
    } else {
        FrameDecision::Keep
    }
}

/// Uniform draw from the simplex restricted to the sup-norm ball of `radius`
/// around `center`. After [`LOCAL_REDRAW_ATTEMPTS`] rejections the last
/// simplex draw is pulled toward `center` until it lies in the ball.
pub fn local_redraw<R: Rng + ?Sized>(
    center: &MixedAction,
    radius: f64,
    rng: &mut R,
) -> MixedAction {
    let m = center.len();
    let mut y = MixedAction::random_uniform(m, rng);
    for _ in 1..LOCAL_REDRAW_ATTEMPTS {
        if y.max_abs_diff(center) <= radius {
            return y;
        }
        y = MixedAction::random_uniform(m, rng);
    }
    let dist = y.max_abs_diff(center);
    if dist <= radius {
        return y;
    }
    let scale = radius / dist;
    let pulled = center
        .probs()
        .iter()
        .zip(y.probs())
        .map(|(c, v)| c + scale * (v - c))
        .collect();
    MixedAction::new_renormalized(pulled).unwrap_or_else(|_| center.clone())
}

fn check_frame_params(
    rule: &str,
    frame_len: u64,
    threshold: f64,
    lambda: f64,
) -> Result<(), RuleError> {
    if frame_len == 0 {
        return Err(bad_param(rule, "T", "frame length must be at least 1"));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(bad_param(
            rule,
            "rho",
            format!("need rho > 0, got {threshold}"),
        ));
    }
    if !(0.0..1.0).contains(&lambda) {
        return Err(bad_param(
            rule,
            "lambda",
            format!("need 0 <= lambda < 1, got {lambda}"),
        ));
    }
    Ok(())
}

/// Fixed-parameter regret testing. `lambda = 0` gives plain Regret Testing.
#[derive(Debug)]
pub struct ExperimentalRegretTesting {
    own: OwnPayoffs,
    frame_len: u64,
    threshold: f64,
    lambda: f64,
    acc: FrameRegret,
    frame: u64,
    x: MixedAction,
    rng: StreamRng,
    events: Vec<RuleEvent>,
}

impl ExperimentalRegretTesting {
    pub const NAME: &'static str = "ert";
    pub const DEFAULT_FRAME_LEN: u64 = 10_000;
    pub const DEFAULT_THRESHOLD: f64 = 0.12;
    pub const DEFAULT_LAMBDA: f64 = 0.001;

    pub fn new(
        ctx: PlayerContext,
        frame_len: u64,
        threshold: f64,
        lambda: f64,
        mut rng: StreamRng,
    ) -> Result<Self, RuleError> {
        let own = ctx.expect_uncoupled(Self::NAME)?;
        check_frame_params(Self::NAME, frame_len, threshold, lambda)?;
        let m = own.num_actions();
        Ok(Self {
            acc: FrameRegret::new(m),
            x: MixedAction::random_uniform(m, &mut rng),
            own,
            frame_len,
            threshold,
            lambda,
            frame: 0,
            rng,
            events: Vec::new(),
        })
    }

    pub fn current(&self) -> &MixedAction {
        &self.x
    }
}

impl Rule for ExperimentalRegretTesting {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn info_class(&self) -> InfoClass {
        InfoClass::Uncoupled
    }

    fn describe(&self) -> String {
        format!(
            "{}[T={},rho={},lambda={}]",
            Self::NAME,
            self.frame_len,
            self.threshold,
            self.lambda
        )
    }

    fn strategy(&mut self, _t: u64) -> &MixedAction {
        &self.x
    }

    fn observe(&mut self, _t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::Uncoupled { index, .. } = *feedback else {
            return Err(mismatch(Self::NAME, InfoClass::Uncoupled, feedback));
        };
        self.acc.record(self.own.game(), self.own.player(), index);
        if self.acc.len() < self.frame_len {
            return Ok(());
        }
        let regrets = self.acc.average();
        self.acc.reset();
        let u: f64 = self.rng.random();
        let decision = ert_decision(&regrets, self.threshold, self.lambda, u);
        self.frame += 1;
        let played = self.x.probs().to_vec();
        if decision.is_redraw() {
            self.x = MixedAction::random_uniform(self.x.len(), &mut self.rng);
        }
        self.events.push(RuleEvent::FrameEnd {
            frame: self.frame,
            regime: None,
            strategy: played,
            regrets,
            decision,
        });
        Ok(())
    }

    fn drain_events(&mut self, out: &mut Vec<RuleEvent>) {
        out.append(&mut self.events);
    }
}

/// Parameters of one ALERT regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlertSchedule {
    pub regime: u32,
    pub eps: f64,
    pub lambda: f64,
    pub threshold: f64,
    pub frame_len: u64,
    pub frames: u64,
}

impl AlertSchedule {
    /// Regime `l >= 1`: `eps = 2^-l`, `lambda = eps^l`, `rho = lambda + eps`,
    /// `T = ceil(-(l ln lambda) / (2 lambda^2))`,
    /// `M = 2 ceil(ln(2/eps) / ln(1/(1-lambda)))`.
    pub fn regime(l: u32) -> Result<Self, RuleError> {
        if l == 0 {
            return Err(bad_param("alert", "l0", "regimes start at 1"));
        }
        let lf = f64::from(l);
        let eps = 0.5f64.powi(l as i32);
        let lambda = eps.powi(l as i32);
        let threshold = lambda + eps;
        let frame_len = ceil_tol(-(lf * lambda.ln()) / (2.0 * lambda * lambda));
        let frames = 2.0 * ceil_tol((2.0 / eps).ln() / -(-lambda).ln_1p());
        // 2^64 as f64; anything at or above it does not fit
        if !(frame_len.is_finite()
            && frame_len < 18_446_744_073_709_551_616.0
            && frames < 18_446_744_073_709_551_616.0)
        {
            return Err(RuleError::ScheduleOverflow(l));
        }
        Ok(Self {
            regime: l,
            eps,
            lambda,
            threshold,
            frame_len: frame_len as u64,
            frames: frames as u64,
        })
    }

    /// Regret level at or above which the redraw is global.
    pub fn high_band(&self) -> f64 {
        self.eps.powf(2.0 / 3.0)
    }

    pub fn local_radius(&self) -> f64 {
        self.eps.sqrt()
    }

    /// Whether `rho < eps^(2/3)`, so the middle band is non-empty.
    pub fn bands_ordered(&self) -> bool {
        self.threshold < self.high_band()
    }

    /// Frame decision from the largest frame regret. `global_before` tells
    /// whether a uniform redraw already happened in this regime; `u` is a
    /// uniform draw on `[0,1)` used for the lambda test.
    pub fn decide(&self, max_regret: f64, global_before: bool, u: f64) -> FrameDecision {
        if max_regret >= self.high_band() {
            FrameDecision::RegretRedraw
        } else if self.bands_ordered() && max_regret >= self.threshold {
            if global_before {
                FrameDecision::MiddleBandRedraw
            } else {
                FrameDecision::LocalRedraw
            }
        } else if u < self.lambda {
            FrameDecision::LambdaRedraw
        } else {
            FrameDecision::Keep
        }
    }
}

/// Frame and regime bookkeeping shared by both ALERT variants.
#[derive(Debug)]
struct AlertCore {
    start: u32,
    schedule: AlertSchedule,
    frames_in_regime: u64,
    frame: u64,
    x: MixedAction,
    entry: MixedAction,
    global_this_regime: bool,
    rng: StreamRng,
    events: Vec<RuleEvent>,
}

impl AlertCore {
    fn new(start: u32, m: usize, mut rng: StreamRng) -> Result<Self, RuleError> {
        let schedule = AlertSchedule::regime(start)?;
        let x = MixedAction::random_uniform(m, &mut rng);
        let events = vec![RuleEvent::RegimeStart {
            regime: start,
            frame_len: schedule.frame_len,
            frames: schedule.frames,
        }];
        Ok(Self {
            start,
            schedule,
            frames_in_regime: 0,
            frame: 0,
            entry: x.clone(),
            x,
            global_this_regime: false,
            rng,
            events,
        })
    }

    /// Applies the end-of-frame decision; returns true when a new regime begins.
    fn end_frame(&mut self, regrets: Vec<f64>) -> Result<bool, RuleError> {
        let max = regrets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let u: f64 = self.rng.random();
        let decision = self.schedule.decide(max, self.global_this_regime, u);
        let played = self.x.clone();
        match decision {
            FrameDecision::Keep => {}
            FrameDecision::LocalRedraw => {
                self.x = local_redraw(&self.entry, self.schedule.local_radius(), &mut self.rng);
            }
            FrameDecision::RegretRedraw
            | FrameDecision::LambdaRedraw
            | FrameDecision::MiddleBandRedraw => {
                self.x = MixedAction::random_uniform(self.x.len(), &mut self.rng);
                self.global_this_regime = true;
            }
        }
        self.frame += 1;
        self.frames_in_regime += 1;
        self.events.push(RuleEvent::FrameEnd {
            frame: self.frame,
            regime: Some(self.schedule.regime),
            strategy: played.probs().to_vec(),
            regrets,
            decision,
        });
        if self.frames_in_regime < self.schedule.frames {
            return Ok(false);
        }
        self.schedule = AlertSchedule::regime(self.schedule.regime + 1)?;
        self.entry = played;
        self.frames_in_regime = 0;
        self.global_this_regime = false;
        self.events.push(RuleEvent::RegimeStart {
            regime: self.schedule.regime,
            frame_len: self.schedule.frame_len,
            frames: self.schedule.frames,
        });
        Ok(true)
    }
}

/// Regret testing with annealed parameters and localized redraws.
#[derive(Debug)]
pub struct Alert {
    own: OwnPayoffs,
    core: AlertCore,
    acc: FrameRegret,
}

impl Alert {
    pub const NAME: &'static str = "alert";
    pub const DEFAULT_START: u32 = 1;

    pub fn new(ctx: PlayerContext, start_regime: u32, rng: StreamRng) -> Result<Self, RuleError> {
        let own = ctx.expect_uncoupled(Self::NAME)?;
        let m = own.num_actions();
        Ok(Self {
            core: AlertCore::new(start_regime, m, rng)?,
            acc: FrameRegret::new(m),
            own,
        })
    }

    pub fn schedule(&self) -> &AlertSchedule {
        &self.core.schedule
    }

    pub fn entry_action(&self) -> &MixedAction {
        &self.core.entry
    }
}

impl Rule for Alert {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn info_class(&self) -> InfoClass {
        InfoClass::Uncoupled
    }

    fn describe(&self) -> String {
        format!("{}[l0={}]", Self::NAME, self.core.start)
    }

    fn strategy(&mut self, _t: u64) -> &MixedAction {
        &self.core.x
    }

    fn observe(&mut self, _t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::Uncoupled { index, .. } = *feedback else {
            return Err(mismatch(Self::NAME, InfoClass::Uncoupled, feedback));
        };
        self.acc.record(self.own.game(), self.own.player(), index);
        if self.acc.len() < self.core.schedule.frame_len {
            return Ok(());
        }
        let regrets = self.acc.average();
        self.acc.reset();
        self.core.end_frame(regrets)?;
        Ok(())
    }

    fn drain_events(&mut self, out: &mut Vec<RuleEvent>) {
        out.append(&mut self.core.events);
    }
}

/// ALERT with regrets estimated from own payoffs at forced exploration periods.
#[derive(Debug)]
pub struct PayoffAlert {
    m: usize,
    per_action: usize,
    core: AlertCore,
    sampler: FrameSampler,
    acc: EstimatedFrameRegret,
    tau: u64,
    next_slot: usize,
    forced: Vec<MixedAction>,
}

impl PayoffAlert {
    pub const NAME: &'static str = "payoff-alert";
    pub const DEFAULT_PER_ACTION: usize = 25;
    pub const DEFAULT_START: u32 = 2;

    pub fn new(
        ctx: PlayerContext,
        per_action: usize,
        start_regime: u32,
        rng: StreamRng,
    ) -> Result<Self, RuleError> {
        let (_, m, _) = ctx.expect_payoff_only(Self::NAME)?;
        let core = AlertCore::new(start_regime, m, rng)?;
        let (sampler, acc) = Self::frame_tools(per_action, m, core.schedule.frame_len)?;
        let mut rule = Self {
            m,
            per_action,
            core,
            sampler,
            acc,
            tau: 0,
            next_slot: 0,
            forced: (0..m).map(|h| MixedAction::pure(m, h)).collect(),
        };
        rule.sampler.draw(&mut rule.core.rng);
        Ok(rule)
    }

    fn frame_tools(
        per_action: usize,
        m: usize,
        frame_len: u64,
    ) -> Result<(FrameSampler, EstimatedFrameRegret), RuleError> {
        let explore = (per_action as u64).saturating_mul(m as u64);
        if per_action == 0 || explore.saturating_mul(2) > frame_len {
            return Err(bad_param(
                Self::NAME,
                "g",
                format!("need 1 <= g and g*m <= T/2, got g={per_action}, m={m}, T={frame_len}"),
            ));
        }
        Ok((
            FrameSampler::new(frame_len, per_action, m)?,
            EstimatedFrameRegret::new(m, per_action, frame_len)?,
        ))
    }

    pub fn schedule(&self) -> &AlertSchedule {
        &self.core.schedule
    }

    fn current_slot(&self) -> Option<usize> {
        self.sampler
            .slots()
            .get(self.next_slot)
            .filter(|(p, _)| *p == self.tau)
            .map(|(_, h)| *h)
    }
}

impl Rule for PayoffAlert {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn info_class(&self) -> InfoClass {
        InfoClass::CompletelyUncoupled
    }

    fn describe(&self) -> String {
        format!(
            "{}[g={},l0={}]",
            Self::NAME,
            self.per_action,
            self.core.start
        )
    }

    fn strategy(&mut self, _t: u64) -> &MixedAction {
        match self.current_slot() {
            Some(h) => &self.forced[h],
            None => &self.core.x,
        }
    }

    fn observe(&mut self, _t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::CompletelyUncoupled { own_payoff, .. } = *feedback else {
            return Err(mismatch(
                Self::NAME,
                InfoClass::CompletelyUncoupled,
                feedback,
            ));
        };
        let slot = self.current_slot();
        if slot.is_some() {
            self.next_slot += 1;
        }
        self.acc.record(slot, own_payoff)?;
        self.tau += 1;
        if self.tau < self.sampler.frame_len() {
            return Ok(());
        }
        let regrets = self.acc.estimate()?;
        if self.core.end_frame(regrets)? {
            let (sampler, acc) =
                Self::frame_tools(self.per_action, self.m, self.core.schedule.frame_len)?;
            self.sampler = sampler;
            self.acc = acc;
        } else {
            self.acc.reset();
        }
        self.tau = 0;
        self.next_slot = 0;
        self.sampler.draw(&mut self.core.rng);
        Ok(())
    }

    fn drain_events(&mut self, out: &mut Vec<RuleEvent>) {
        out.append(&mut self.core.events);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Purpose, Streams};

    fn rng(k: u32) -> StreamRng {
        Streams::new(3).stream(Purpose::RuleInternal, k)
    }

    #[test]
    fn schedule_hand_values() {
        let s1 = AlertSchedule::regime(1).unwrap();
        assert_eq!((s1.eps, s1.lambda, s1.threshold), (0.5, 0.5, 1.0));
        assert_eq!((s1.frame_len, s1.frames), (2, 4));
        assert!(!s1.bands_ordered());

        let s2 = AlertSchedule::regime(2).unwrap();
        assert_eq!((s2.eps, s2.lambda, s2.threshold), (0.25, 0.0625, 0.3125));
        // 128 * 2 ln 16 = 709.78
        assert_eq!((s2.frame_len, s2.frames), (710, 66));
        assert!(s2.bands_ordered());

        let s3 = AlertSchedule::regime(3).unwrap();
        assert_eq!(s3.lambda, 2f64.powi(-9));
        // 2^17 * 27 ln 2 = 2453009.06
        assert_eq!((s3.frame_len, s3.frames), (2_453_010, 2838));

        let s4 = AlertSchedule::regime(4).unwrap();
        // 2^31 * 64 ln 2 = 95265423098.2; ln 32 / -ln(1 - 2^-16) = 227128.7
        assert_eq!((s4.frame_len, s4.frames), (95_265_423_099, 454_258));

        let s5 = AlertSchedule::regime(5).unwrap();
        assert_eq!(s5.lambda, 2f64.powi(-25));
        // 2^49 * 125 ln 2 = 4.8776e16; ln 64 / -ln(1 - 2^-25) = 139548957.5
        assert!((s5.frame_len as f64 / 4.877589662629187e16 - 1.0).abs() < 1e-12);
        assert_eq!(s5.frames, 279_097_916);
        assert!(matches!(
            AlertSchedule::regime(6),
            Err(RuleError::ScheduleOverflow(6))
        ));
    }

    #[test]
    fn schedule_invariants() {
        let mut prev = f64::INFINITY;
        for l in 1..=20u32 {
            let eps = 0.5f64.powi(l as i32);
            let lambda = eps.powi(l as i32);
            assert!(eps < prev);
            prev = eps;
            assert!(lambda + eps > lambda);
            // bands ordered from l = 2 on
            assert_eq!(lambda + eps < eps.powf(2.0 / 3.0), l >= 2, "l = {l}");
        }
        for l in 1..=5 {
            let s = AlertSchedule::regime(l).unwrap();
            assert!(s.frame_len >= 1 && s.frames >= 2);
        }
    }

    #[test]
    fn alert_branch_table() {
        let s = AlertSchedule::regime(2).unwrap();
        let hi = s.high_band();
        let rows = [
            // (max regret, global before, u, expected)
            (hi, false, 0.9, FrameDecision::RegretRedraw),
            (hi + 0.1, true, 0.0, FrameDecision::RegretRedraw),
            (s.threshold, false, 0.9, FrameDecision::LocalRedraw),
            (s.threshold, true, 0.9, FrameDecision::MiddleBandRedraw),
            (hi - 1e-9, false, 0.0, FrameDecision::LocalRedraw),
            (s.threshold - 1e-9, false, 0.9, FrameDecision::Keep),
            (s.threshold - 1e-9, true, 0.9, FrameDecision::Keep),
            (0.0, false, s.lambda - 1e-9, FrameDecision::LambdaRedraw),
            (-1.0, false, s.lambda, FrameDecision::Keep),
        ];
        for (r, g, u, want) in rows {
            assert_eq!(s.decide(r, g, u), want, "r={r} g={g} u={u}");
        }
        // inverted bands at l = 1: nothing goes local
        let s1 = AlertSchedule::regime(1).unwrap();
        assert_eq!(s1.decide(0.7, false, 0.9), FrameDecision::RegretRedraw);
        assert_eq!(s1.decide(0.6, false, 0.9), FrameDecision::Keep);
        assert_eq!(s1.decide(0.6, false, 0.1), FrameDecision::LambdaRedraw);
    }

    #[test]
    fn ert_branch_table() {
        assert_eq!(
            ert_decision(&[0.0, 0.1], 0.12, 0.0, 0.0),
            FrameDecision::Keep
        );
        assert_eq!(
            ert_decision(&[0.0, 0.12], 0.12, 0.5, 0.9),
            FrameDecision::RegretRedraw
        );
        assert_eq!(
            ert_decision(&[0.0, 0.1], 0.12, 0.5, 0.4),
            FrameDecision::LambdaRedraw
        );
        assert_eq!(
            ert_decision(&[0.0, 0.1], 0.12, 0.5, 0.5),
            FrameDecision::Keep
        );
    }

    #[test]
    fn local_redraw_stays_in_ball() {
        let mut r = rng(0);
        let center = MixedAction::new(vec![0.2, 0.5, 0.3]).unwrap();
        for _ in 0..2000 {
            let y = local_redraw(&center, 0.1, &mut r);
            assert!(y.is_valid());
            assert!(y.max_abs_diff(&center) <= 0.1 + 1e-12);
        }
    }

    #[test]
    fn local_redraw_fallback_is_valid() {
        let mut r = rng(1);
        // a vertex with a tiny radius is almost never hit by rejection sampling
        let center = MixedAction::pure(4, 2);
        for _ in 0..200 {
            assert!(local_redraw(&center, 1e-4, &mut r).is_valid());
        }
    }
}
