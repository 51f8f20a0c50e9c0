//! Trial-and-error learning on Entry Deterrence under three acceptance
//! functions, then a single run with its mood trajectory.

use uncoupled::cli::presets;
use uncoupled::engine::{run, RecordMode, SimConfig};
use uncoupled::games::builtin::entry_deterrence;
use uncoupled::rules::parse_rule_list;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = presets::table1(1, 40, 20_000)?;
    println!("phi    P1 (1,1)  P2 (2,2)  total");
    for r in &rows {
        println!(
            "{:<6} {:>8.3}  {:>8.3}  {:>5.3}",
            r.label, r.p1.mean, r.p2.mean, r.total.mean
        );
    }

    let cfg = SimConfig::new(
        entry_deterrence(),
        parse_rule_list("trial-error", 2)?,
        400,
        7,
    )
    .with_record(RecordMode::Full);
    let trace = run(&cfg)?;
    for rec in trace.records().iter().step_by(40) {
        let moods: Vec<String> = rec
            .moods
            .iter()
            .map(|m| m.map_or("-".into(), |m| m.to_string()))
            .collect();
        println!(
            "t={:<4} profile {} moods {}",
            rec.t,
            rec.profile,
            moods.join(" ")
        );
    }
    Ok(())
}
