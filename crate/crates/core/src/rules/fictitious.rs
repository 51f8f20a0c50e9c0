//! Fictitious play: best reply to the opponents' empirical play.

use rand::seq::IndexedRandom;

use crate::games::MixedAction;
use crate::rng::StreamRng;

use super::{mismatch, Feedback, InfoClass, OwnPayoffs, PlayerContext, Rule, RuleError};

/// Relative slack under which two cumulative payoffs count as tied.
const TIE_TOL: f64 = 1e-9;

#[derive(Debug)]
pub struct FictitiousPlay {
    own: OwnPayoffs,
    // cumulative payoff of each own action against the realized opponents
    totals: Vec<f64>,
    periods: u64,
    uniform: MixedAction,
    pure: Vec<MixedAction>,
    best: Vec<usize>,
    rng: StreamRng,
}

impl FictitiousPlay {
    pub const NAME: &'static str = "fictitious";

    pub fn new(ctx: PlayerContext, rng: StreamRng) -> Result<Self, RuleError> {
        let own = ctx.expect_uncoupled(Self::NAME)?;
        let m = own.num_actions();
        Ok(Self {
            own,
            totals: vec![0.0; m],
            periods: 0,
            uniform: MixedAction::uniform(m),
            pure: (0..m).map(|a| MixedAction::pure(m, a)).collect(),
            best: Vec::with_capacity(m),
            rng,
        })
    }

    /// Actions maximizing the cumulative payoff, up to a relative tie tolerance.
    pub fn argmax_set(&self) -> Vec<usize> {
        let top = self
            .totals
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let slack = TIE_TOL * top.abs().max(1.0);
        (0..self.totals.len())
            .filter(|&k| self.totals[k] >= top - slack)
            .collect()
    }
}

impl Rule for FictitiousPlay {
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
        if self.periods == 0 {
            return &self.uniform;
        }
        self.best = self.argmax_set();
        let pick = *self
            .best
            .choose(&mut self.rng)
            .expect("argmax set is never empty");
        &self.pure[pick]
    }

    fn observe(&mut self, _t: u64, feedback: &Feedback<'_>) -> Result<(), RuleError> {
        let Feedback::Uncoupled { index, .. } = *feedback else {
            return Err(mismatch(Self::NAME, InfoClass::Uncoupled, feedback));
        };
        for (k, total) in self.totals.iter_mut().enumerate() {
            *total += self.own.against(k, index);
        }
        self.periods += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::builtin::entry_deterrence;
    use crate::games::{Game, PureProfile};
    use crate::rng::{Purpose, Streams};
    use std::sync::Arc;

    fn rule(g: &Arc<Game>, i: usize) -> FictitiousPlay {
        let rng = Streams::new(5).stream(Purpose::RuleInternal, i as u32);
        FictitiousPlay::new(PlayerContext::for_class(InfoClass::Uncoupled, g, i), rng).unwrap()
    }

    #[test]
    fn best_reply_to_history() {
        let g = Arc::new(entry_deterrence());
        let mut row = rule(&g, 0);
        assert_eq!(row.strategy(1).probs(), &[0.5, 0.5]);
        let s = PureProfile(vec![1, 0]);
        for t in 1..=9 {
            row.observe(
                t,
                &Feedback::Uncoupled {
                    profile: &s,
                    index: g.index_of(&s).unwrap(),
                },
            )
            .unwrap();
        }
        // column played 1 nine times: 2 > 1
        assert_eq!(row.argmax_set(), vec![0]);
        assert_eq!(row.strategy(10).probs(), &[1.0, 0.0]);
    }

    #[test]
    fn constant_payoff_ties_break_both_ways() {
        let g = Arc::new(Game::from_fn(vec![3, 2], |_| vec![1.0, 1.0]).unwrap());
        let mut r = rule(&g, 0);
        let s = PureProfile(vec![0, 0]);
        r.observe(
            1,
            &Feedback::Uncoupled {
                profile: &s,
                index: 0,
            },
        )
        .unwrap();
        assert_eq!(r.argmax_set(), vec![0, 1, 2]);
        let mut seen = [0usize; 3];
        for t in 2..3000 {
            let a = r
                .strategy(t)
                .probs()
                .iter()
                .position(|p| *p == 1.0)
                .unwrap();
            seen[a] += 1;
        }
        assert!(seen.iter().all(|c| *c > 850), "{seen:?}");
    }
}
