//! Parallel replicates with a JSON report.

use uncoupled::engine::{batch, RecordMode, SimConfig};
use uncoupled::games::builtin::coordination;
use uncoupled::rules::parse_rule_list;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SimConfig::new(
        coordination(),
        parse_rule_list("trial-error", 2)?,
        10_000,
        11,
    )
    .with_record(RecordMode::Summary);
    let report = batch(&cfg, 16)?;
    for a in &report.aggregates {
        println!("{:<20} mean {:.4}  sd {:.4}", a.name, a.mean, a.stddev);
    }
    let json = report.to_json();
    println!("{}", json.lines().take(12).collect::<Vec<_>>().join("\n"));
    Ok(())
}
