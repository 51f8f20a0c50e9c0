//! The two pure-equilibrium rules on random 2x2 games: time to absorption and
//! whether the absorbing profile is an equilibrium.

use uncoupled::engine::{run, RecordMode, SimConfig};
use uncoupled::games::builtin::random;
use uncoupled::rules::parse_rule_list;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for seed in 0..6 {
        let game = random(2, &[2, 2], seed, 0.0, 1.0)?;
        let ne = game.pure_nash_equilibria();
        let names: Vec<String> = ne.iter().map(ToString::to_string).collect();
        print!("game {seed}: pure equilibria [{}]", names.join(" "));
        for rules in ["simple-pure", "two-recall"] {
            let cfg = SimConfig::new(game.clone(), parse_rule_list(rules, 2)?, 5_000, seed)
                .with_record(RecordMode::Summary);
            let trace = run(&cfg)?;
            let last = trace.final_profile().expect("horizon is positive");
            print!(
                "  {rules}: {} since t={} ({})",
                last,
                trace.constant_since(),
                if game.is_pure_nash(&last, 0.0)? {
                    "NE"
                } else {
                    "not NE"
                }
            );
        }
        println!();
    }
    Ok(())
}
