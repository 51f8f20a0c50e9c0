//! CSV export of traces and rule events.

use std::io::Write;

use crate::rules::RuleEvent;

use super::{EngineError, Trace};

fn csv_err(e: impl std::fmt::Display) -> EngineError {
    EngineError::Export(e.to_string())
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Columns `t, s_1..s_n, pi_1..pi_n`, plus `mood_1..mood_n` when any rule
/// reports a mood. Actions are 1-based.
pub fn write_trace_csv<W: Write>(trace: &Trace, out: W) -> Result<(), EngineError> {
    let n = trace.game().num_players();
    let with_moods = trace
        .records()
        .iter()
        .any(|r| r.moods.iter().any(Option::is_some));
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("s_{i}")));
    header.extend((1..=n).map(|i| format!("pi_{i}")));
    if with_moods {
        header.extend((1..=n).map(|i| format!("mood_{i}")));
    }
    w.write_record(&header).map_err(csv_err)?;
    for rec in trace.records() {
        let mut row = vec![rec.t.to_string()];
        row.extend(rec.profile.iter().map(|a| (a + 1).to_string()));
        row.extend(rec.payoffs.iter().map(|v| v.to_string()));
        if with_moods {
            row.extend(
                rec.moods
                    .iter()
                    .map(|m| m.map_or_else(|| "-".to_string(), |m| m.to_string())),
            );
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// One row per rule event: `t, player, kind, frame, regime, decision, strategy, regrets`.
/// Vectors are `;`-separated; players are 1-based.
pub fn write_events_csv<W: Write>(trace: &Trace, out: W) -> Result<(), EngineError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t", "player", "kind", "frame", "regime", "decision", "strategy", "regrets",
    ])
    .map_err(csv_err)?;
    for e in trace.events() {
        let (t, player) = (e.t.to_string(), (e.player + 1).to_string());
        let row: [String; 8] = match &e.event {
            RuleEvent::FrameEnd {
                frame,
                regime,
                strategy,
                regrets,
                decision,
            } => [
                t,
                player,
                "frame".into(),
                frame.to_string(),
                regime.map(|l| l.to_string()).unwrap_or_default(),
                decision.label().into(),
                join(strategy),
                join(regrets),
            ],
            RuleEvent::RegimeStart {
                regime,
                frame_len,
                frames,
            } => [
                t,
                player,
                "regime".into(),
                String::new(),
                regime.to_string(),
                format!("T={frame_len};M={frames}"),
                String::new(),
                String::new(),
            ],
            RuleEvent::Frozen { action } => [
                t,
                player,
                "frozen".into(),
                String::new(),
                String::new(),
                format!("action={}", action + 1),
                String::new(),
                String::new(),
            ],
        };
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}
