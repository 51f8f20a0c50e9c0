//! Regret matching on Matching Pennies: the cumulative empirical distribution
//! approaches the correlated equilibria while the windowed one keeps cycling.

use uncoupled::cli::presets;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let series = presets::mp_rm(1, 50_000, 200, 5_000)?;
    println!("{:>7}  {:>10}  {:>10}", "t", "cumulative", "window");
    for (c, w) in series.cumulative.iter().zip(&series.windows) {
        println!("{:>7}  {:>10.4}  {:>10.4}", c.t, c.min_ce_eps, w.min_ce_eps);
    }
    if let Some(last) = series.cumulative.last() {
        println!("final joint {:?}", last.joint.probs());
    }
    Ok(())
}
