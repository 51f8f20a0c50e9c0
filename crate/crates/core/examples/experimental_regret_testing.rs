//! Experimental regret testing on Entry Deterrence, one line per frame until
//! the mixed profile settles near an equilibrium.

use uncoupled::cli::presets;
use uncoupled::engine::run;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trace = run(&presets::ert_config(200, 2))?;
    let rows = presets::frame_rows(&trace);
    let capture = presets::first_capture(&rows, 0.12);
    for r in rows.iter().take(capture.map_or(40, |c| c + 5)) {
        println!(
            "frame {:>3}  x1 {:.3}  x2 {:.3}  regrets {:.3}/{:.3}  {}/{}  gap {:.3}",
            r.frame,
            r.strategies[0][0],
            r.strategies[1][0],
            r.max_regrets[0],
            r.max_regrets[1],
            r.decisions[0].label(),
            r.decisions[1].label(),
            r.nash_gap
        );
    }
    match capture {
        Some(c) => println!("captured at frame {}", rows[c].frame),
        None => println!("no capture within 200 frames"),
    }
    Ok(())
}
