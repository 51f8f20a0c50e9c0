//! ALERT and its payoff-based variant: regime schedule and the first frames
//! of play on a small random game.

use uncoupled::engine::{run, RecordMode, SimConfig};
use uncoupled::games::builtin::random;
use uncoupled::rules::{parse_rule_list, AlertSchedule, RuleEvent};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for l in 1..=5 {
        let s = AlertSchedule::regime(l)?;
        println!(
            "l={l}  eps {:.4}  lambda {:.3e}  threshold {:.4}  T {}  M {}",
            s.eps, s.lambda, s.threshold, s.frame_len, s.frames
        );
    }

    let game = random(2, &[2, 3], 9, 0.0, 1.0)?;
    for rules in ["alert", "payoff-alert"] {
        let cfg = SimConfig::new(game.clone(), parse_rule_list(rules, 2)?, 20_000, 1)
            .with_record(RecordMode::Summary);
        let trace = run(&cfg)?;
        let mut decisions = std::collections::BTreeMap::new();
        for e in trace.events() {
            if let RuleEvent::FrameEnd { decision, .. } = &e.event {
                *decisions.entry(decision.label()).or_insert(0) += 1;
            }
        }
        println!(
            "{rules:<13} frame decisions {decisions:?}, min_ce_eps {:.3}",
            trace.min_ce_eps()
        );
    }
    Ok(())
}
