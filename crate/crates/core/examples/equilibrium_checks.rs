//! Equilibrium verifiers and the sample bound for empirical correlated
//! equilibria.

use uncoupled::games::builtin::{battle_of_sexes, entry_deterrence, matching_pennies};
use uncoupled::games::{ce_time_bound, JointDistribution, MixedAction, MixedProfile, PureProfile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ed = entry_deterrence();
    for s in ed.profiles() {
        println!(
            "entry deterrence {s}: pure NE {}",
            ed.is_pure_nash(&s, 0.0)?
        );
    }

    let mp = matching_pennies();
    let half = MixedProfile::new(&mp, vec![MixedAction::uniform(2), MixedAction::uniform(2)])?;
    let skew = MixedProfile::new(
        &mp,
        vec![MixedAction::new(vec![0.6, 0.4])?, MixedAction::uniform(2)],
    )?;
    println!("matching pennies uniform nash_gap {}", mp.nash_gap(&half)?);
    println!(
        "matching pennies (0.6,0.4) nash_gap {:.3}",
        mp.nash_gap(&skew)?
    );

    let bos = battle_of_sexes();
    let mix = JointDistribution::new(&bos, vec![0.5, 0.0, 0.0, 0.5])?;
    println!(
        "battle of sexes coin flip: min_ce_eps {}",
        bos.min_ce_eps(&mix)?
    );
    let bad = JointDistribution::point_mass(&bos, &PureProfile(vec![1, 0]))?;
    println!(
        "battle of sexes miscoordination: min_ce_eps {}",
        bos.min_ce_eps(&bad)?
    );

    for eps in [0.1, 0.05, 0.01] {
        println!(
            "bound 2x2, eps {eps}, delta 0.05: {:.0} periods",
            ce_time_bound(2, &[2, 2], eps, 0.05)?
        );
    }
    Ok(())
}
