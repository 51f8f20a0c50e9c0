//! Fictitious play on Matching Pennies: empirical marginals converge to the
//! mixed equilibrium.

use uncoupled::engine::{run, SimConfig};
use uncoupled::games::builtin::matching_pennies;
use uncoupled::games::MixedProfile;
use uncoupled::rules::parse_rule_list;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let game = matching_pennies();
    let cfg = SimConfig::new(game.clone(), parse_rule_list("fictitious", 2)?, 20_000, 5);
    let trace = run(&cfg)?;
    for t in [10, 100, 1_000, 10_000, 20_000] {
        let x: Vec<_> = (0..2)
            .map(|i| trace.empirical_marginal(i, t))
            .collect::<Result<_, _>>()?;
        let p = (x[0].probs()[0], x[1].probs()[0]);
        let gap = game.nash_gap(&MixedProfile::new(&game, x)?)?;
        println!(
            "t={t:<6} P(heads) {:.4} / {:.4}  nash_gap {gap:.4}",
            p.0, p.1
        );
    }
    Ok(())
}
