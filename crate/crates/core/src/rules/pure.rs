//! Two simple uncoupled rules that find pure equilibria.

use crate::games::MixedAction;

use super::{
    bad_param, mismatch, Feedback, InfoClass, OwnPayoffs, PlayerContext, Rule, RuleError, RuleEvent,
};

/// Odd periods explore uniformly; even periods report whether the previous
/// period's own action was a best reply (action 1) or not (action 2). When
/// an even period is all ones the rule freezes on the last odd-period action.
#[derive(Debug)]
pub struct SimplePure {
    own: OwnPayoffs,
    uniform: MixedAction,
    report: [MixedAction; 2],
    last_odd: Option<usize>,
    last_was_best: bool,
    frozen: Option<MixedAction>,
    events: Vec<RuleEvent>,
}

impl SimplePure {
    pub const NAME: &'static str = "simple-pure";

    pub fn new(ctx: PlayerContext) -> Result<Self, RuleError> {
        let own = ctx.expect_uncoupled(Self::NAME)?;
        let m = own.num_actions();
        if m < 2 {
            return Err(bad_param(
                Self::NAME,
                "m",
                format!("every player needs at least 2 actions, got {m}"),
            ));
        }
        Ok(Self {
            uniform: MixedAction::uniform(m),
            report: [MixedAction::pure(m, 0), MixedAction::pure(m, 1)],
            own,
            last_odd: None,
            last_was_best: false,
            frozen: None,
            events: Vec::new(),
        })
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen.is_some()
    }
}

impl Rule for SimplePure {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn info_class(&self) -> InfoClass {
        InfoClass::Uncoupled
    }

    fn describe(&self) -> String {
        Self::NAME.to_string()
    }

    fn strategy(&mut self, t: u64) -> &MixedAction {
        if let Some(x) = &self.frozen {
            x
        } else if t % 2 == 1 {
            &self.uniform
        } else {
            &self.report[usize::from(!self.last_was_best)]
        }
    }

    fn observe(&mut self, t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::Uncoupled { profile, index } = *feedback else {
            return Err(mismatch(Self::NAME, InfoClass::Uncoupled, feedback));
        };
        if self.frozen.is_some() {
            return Ok(());
        }
        if t % 2 == 1 {
            self.last_odd = Some(self.own.own_action(index));
            self.last_was_best = self.own.is_best_reply(index);
        } else if profile.iter().all(|a| *a == 0) {
            if let Some(a) = self.last_odd {
                self.frozen = Some(MixedAction::pure(self.own.num_actions(), a));
                self.events.push(RuleEvent::Frozen { action: a });
            }
        }
        Ok(())
    }

    fn drain_events(&mut self, out: &mut Vec<RuleEvent>) {
        out.append(&mut self.events);
    }
}

/// Repeats the last action when the last two profiles agree and the own
/// action was a best reply; otherwise plays uniformly.
#[derive(Debug)]
pub struct TwoRecall {
    own: OwnPayoffs,
    uniform: MixedAction,
    repeat: Vec<MixedAction>,
    previous: Option<usize>,
    before: Option<usize>,
}

impl TwoRecall {
    pub const NAME: &'static str = "two-recall";

    pub fn new(ctx: PlayerContext) -> Result<Self, RuleError> {
        let own = ctx.expect_uncoupled(Self::NAME)?;
        let m = own.num_actions();
        Ok(Self {
            uniform: MixedAction::uniform(m),
            repeat: (0..m).map(|a| MixedAction::pure(m, a)).collect(),
            own,
            previous: None,
            before: None,
        })
    }
}

impl Rule for TwoRecall {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn info_class(&self) -> InfoClass {
        InfoClass::Uncoupled
    }

    fn describe(&self) -> String {
        Self::NAME.to_string()
    }

    fn strategy(&mut self, _t: u64) -> &MixedAction {
        match (self.previous, self.before) {
            (Some(p), Some(b)) if p == b && self.own.is_best_reply(p) => {
                &self.repeat[self.own.own_action(p)]
            }
            _ => &self.uniform,
        }
    }

    fn observe(&mut self, _t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::Uncoupled { index, .. } = *feedback else {
            return Err(mismatch(Self::NAME, InfoClass::Uncoupled, feedback));
        };
        self.before = self.previous;
        self.previous = Some(index);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::builtin::entry_deterrence;
    use crate::games::{Game, PureProfile};
    use std::sync::Arc;

    fn ctx(g: &Arc<Game>, i: usize) -> PlayerContext {
        PlayerContext::for_class(InfoClass::Uncoupled, g, i)
    }

    fn feed(rule: &mut dyn Rule, g: &Game, t: u64, s: &[usize]) {
        let p = PureProfile(s.to_vec());
        let index = g.index_of(&p).unwrap();
        rule.observe(t, &Feedback::Uncoupled { profile: &p, index })
            .unwrap();
    }

    #[test]
    fn simple_pure_reports_and_freezes() {
        let g = Arc::new(entry_deterrence());
        let mut rules = [
            SimplePure::new(ctx(&g, 0)).unwrap(),
            SimplePure::new(ctx(&g, 1)).unwrap(),
        ];
        assert_eq!(rules[0].strategy(1).probs(), &[0.5, 0.5]);
        // (2,2) is a pure equilibrium: both report action 1
        for r in rules.iter_mut() {
            feed(r, &g, 1, &[1, 1]);
            assert_eq!(r.strategy(2).probs(), &[1.0, 0.0]);
        }
        for r in rules.iter_mut() {
            feed(r, &g, 2, &[0, 0]);
            assert!(r.is_frozen());
            for t in 3..10 {
                assert_eq!(r.strategy(t).probs(), &[0.0, 1.0]);
            }
        }
    }

    #[test]
    fn simple_pure_reports_two_off_best_reply() {
        let g = Arc::new(entry_deterrence());
        let mut row = SimplePure::new(ctx(&g, 0)).unwrap();
        // (2,1): row gets 1 but 2 was available
        feed(&mut row, &g, 1, &[1, 0]);
        assert_eq!(row.strategy(2).probs(), &[0.0, 1.0]);
        feed(&mut row, &g, 2, &[1, 0]);
        assert!(!row.is_frozen());
        assert_eq!(row.strategy(3).probs(), &[0.5, 0.5]);
    }

    #[test]
    fn two_recall_absorbs_at_equilibrium() {
        let g = Arc::new(entry_deterrence());
        let mut r = TwoRecall::new(ctx(&g, 1)).unwrap();
        assert_eq!(r.strategy(1).probs(), &[0.5, 0.5]);
        feed(&mut r, &g, 1, &[0, 0]);
        assert_eq!(r.strategy(2).probs(), &[0.5, 0.5]);
        feed(&mut r, &g, 2, &[0, 0]);
        assert_eq!(r.strategy(3).probs(), &[1.0, 0.0]);
    }

    #[test]
    fn two_recall_randomizes_off_best_reply() {
        let g = Arc::new(entry_deterrence());
        let mut row = TwoRecall::new(ctx(&g, 0)).unwrap();
        let mut col = TwoRecall::new(ctx(&g, 1)).unwrap();
        for t in 1..=2 {
            feed(&mut row, &g, t, &[1, 0]);
            feed(&mut col, &g, t, &[1, 0]);
        }
        assert_eq!(row.strategy(3).probs(), &[0.5, 0.5]);
        // column is indifferent at row 2, so it repeats
        assert_eq!(col.strategy(3).probs(), &[1.0, 0.0]);
    }
}
