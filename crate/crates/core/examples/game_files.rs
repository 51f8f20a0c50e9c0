//! Games and distributions from TOML text, and a trace exported as CSV.

use uncoupled::engine::{run, write_trace_csv, RecordMode, SimConfig};
use uncoupled::games::io::{load_distribution, load_game, save_game, DistributionSpec};
use uncoupled::rules::parse_rule_list;

const GAME: &str = r#"
name = "stag-hunt"
players = 2
actions = [2, 2]
payoffs = [[4, 4], [3, 0], [0, 3], [3, 3]]
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let game = load_game(GAME)?;
    print!("{}", save_game(&game));

    if let DistributionSpec::Joint(q) = load_distribution("joint = [0.5, 0, 0, 0.5]", &game)? {
        println!("min_ce_eps of the 50/50 lottery: {}", game.min_ce_eps(&q)?);
    }

    let cfg = SimConfig::new(game, parse_rule_list("two-recall", 2)?, 50, 3)
        .with_record(RecordMode::Thin(10));
    write_trace_csv(&run(&cfg)?, std::io::stdout().lock())?;
    Ok(())
}
