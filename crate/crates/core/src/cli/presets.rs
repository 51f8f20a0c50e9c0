//! Canned experiments: trial-and-error equilibrium selection on Entry
//! Deterrence, regret matching on Matching Pennies, and experimental regret
//! testing on Entry Deterrence.

use std::io::Write;

use crate::engine::{batch, Aggregate, EngineError, RecordMode, SimConfig, Trace};
use crate::games::builtin::{entry_deterrence, matching_pennies};
use crate::games::{Game, JointDistribution, MixedAction, MixedProfile};
use crate::rng::PRNG_IDENTITY;
use crate::rules::{ExperimentalRegretTesting, FrameDecision, PhiFunction, RuleEvent, RuleSpec};

pub const TABLE1_EPS: f64 = 0.01;
pub const TABLE1_RUNS: u64 = 200;
pub const TABLE1_HORIZON: u64 = 50_000;

/// Acceptance functions `(p, q, c, lo, hi)` with reference frequencies of the
/// equilibria (1,1) and (2,2), both to be scaled by `1 - eps`.
pub const TABLE1_PHIS: [(&str, [f64; 5], [f64; 2]); 3] = [
    ("phi1", [0.001, 0.05, 0.95, 0.01, 0.99], [0.471, 0.529]),
    ("phi2", [0.6, 0.1, 0.05, 0.01, 0.99], [0.718, 0.282]),
    ("phi3", [0.2, 0.4, 0.15, 0.01, 0.99], [0.125, 0.875]),
];

pub const MP_RM_HORIZON: u64 = 100_000;
pub const MP_RM_WINDOW: u64 = 200;
pub const MP_RM_STRIDE: u64 = 50;

pub const ERT_FRAMES: u64 = 2000;
/// Consecutive low-regret frames that count as a capture.
pub const CAPTURE_RUN: usize = 10;

fn echo<W: Write>(out: &mut W, pairs: &[(&str, String)]) -> std::io::Result<()> {
    for (k, v) in pairs {
        writeln!(out, "# {k} = {v}")?;
    }
    Ok(())
}

fn export<E: std::fmt::Display>(e: E) -> EngineError {
    EngineError::Export(e.to_string())
}

fn phi_of(coef: [f64; 5]) -> PhiFunction {
    PhiFunction::new(coef[0], coef[1], coef[2], coef[3], coef[4])
        .expect("preset coefficients are valid")
}

pub fn table1_config(phi: PhiFunction, horizon: u64, seed: u64) -> SimConfig {
    let spec = RuleSpec::TrialError {
        eps: TABLE1_EPS,
        phi,
    };
    SimConfig::new(entry_deterrence(), vec![spec.clone(), spec], horizon, seed)
        .with_record(RecordMode::Summary)
}

#[derive(Debug, Clone)]
pub struct Table1Row {
    pub label: &'static str,
    pub phi: PhiFunction,
    /// Frequency of (1,1) across runs.
    pub p1: Aggregate,
    /// Frequency of (2,2) across runs.
    pub p2: Aggregate,
    /// Frequency of either equilibrium across runs.
    pub total: Aggregate,
    pub reference: [f64; 2],
}

/// Runs every acceptance function of the table with the same master seed.
pub fn table1(seed: u64, runs: u64, horizon: u64) -> Result<Vec<Table1Row>, EngineError> {
    TABLE1_PHIS
        .iter()
        .map(|&(label, coef, reference)| {
            let phi = phi_of(coef);
            let report = batch(&table1_config(phi, horizon, seed), runs)?;
            let get = |name: &str| {
                report
                    .aggregate(name)
                    .cloned()
                    .expect("entry deterrence has both equilibria")
            };
            Ok(Table1Row {
                label,
                phi,
                p1: get("freq(1,1)"),
                p2: get("freq(2,2)"),
                total: get("nash_total"),
                reference,
            })
        })
        .collect()
}

pub fn write_table1<W: Write>(
    rows: &[Table1Row],
    seed: u64,
    runs: u64,
    horizon: u64,
    mut out: W,
) -> Result<(), EngineError> {
    echo(
        &mut out,
        &[
            ("preset", "table1".into()),
            ("game", "entry-deterrence".into()),
            (
                "rules",
                format!("trial-error[eps={TABLE1_EPS},phi=<row>] x2"),
            ),
            ("runs", runs.to_string()),
            ("horizon", horizon.to_string()),
            ("seed", seed.to_string()),
            ("prng", PRNG_IDENTITY.into()),
            ("p1", "(1,1) payoffs (2,2)".into()),
            ("p2", "(2,2) payoffs (1,4)".into()),
            ("reference_scale", format!("{}", 1.0 - TABLE1_EPS)),
        ],
    )
    .map_err(export)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "phi",
        "coefficients",
        "freq_p1",
        "freq_p2",
        "freq_total",
        "sd_p1",
        "sd_p2",
        "reference_p1",
        "reference_p2",
    ])
    .map_err(export)?;
    for r in rows {
        w.write_record([
            r.label.to_string(),
            r.phi.to_string(),
            format!("{:.6}", r.p1.mean),
            format!("{:.6}", r.p2.mean),
            format!("{:.6}", r.total.mean),
            format!("{:.6}", r.p1.stddev),
            format!("{:.6}", r.p2.stddev),
            r.reference[0].to_string(),
            r.reference[1].to_string(),
        ])
        .map_err(export)?;
    }
    w.flush().map_err(export)
}

pub fn mp_rm_config(horizon: u64, seed: u64) -> SimConfig {
    let spec = RuleSpec::RegretMatching { mu: None };
    SimConfig::new(matching_pennies(), vec![spec.clone(), spec], horizon, seed)
}

/// One point of a distribution series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub t: u64,
    pub joint: JointDistribution,
    pub min_ce_eps: f64,
}

#[derive(Debug, Clone)]
pub struct MpRmSeries {
    /// Empirical distribution of play up to `t`.
    pub cumulative: Vec<SeriesPoint>,
    /// Distribution over the `window` periods ending at `t`.
    pub windows: Vec<SeriesPoint>,
}

pub fn mp_rm(seed: u64, horizon: u64, window: u64, stride: u64) -> Result<MpRmSeries, EngineError> {
    let trace = crate::engine::run(&mp_rm_config(horizon, seed))?;
    let game = trace.game();
    let point = |(t, joint): (u64, JointDistribution)| {
        let min_ce_eps = game.min_ce_eps(&joint).expect("joint matches the game");
        SeriesPoint {
            t,
            joint,
            min_ce_eps,
        }
    };
    Ok(MpRmSeries {
        cumulative: trace
            .cumulative_series(stride)?
            .into_iter()
            .map(point)
            .collect(),
        windows: trace
            .moving_window_distribution(window, stride)?
            .into_iter()
            .map(point)
            .collect(),
    })
}

pub fn write_series<W: Write>(
    game: &Game,
    points: &[SeriesPoint],
    header: &[(&str, String)],
    mut out: W,
) -> Result<(), EngineError> {
    echo(&mut out, header).map_err(export)?;
    let mut w = csv::Writer::from_writer(out);
    let mut cols = vec!["t".to_string()];
    cols.extend(game.profiles().map(|s| format!("phi{s}")));
    cols.push("min_ce_eps".into());
    w.write_record(&cols).map_err(export)?;
    for p in points {
        let mut row = vec![p.t.to_string()];
        row.extend(p.joint.probs().iter().map(|v| format!("{v:.6}")));
        row.push(format!("{:.6}", p.min_ce_eps));
        w.write_record(&row).map_err(export)?;
    }
    w.flush().map_err(export)
}

pub fn ert_config(frames: u64, seed: u64) -> SimConfig {
    let spec = RuleSpec::Ert {
        frame_len: ExperimentalRegretTesting::DEFAULT_FRAME_LEN,
        threshold: ExperimentalRegretTesting::DEFAULT_THRESHOLD,
        lambda: ExperimentalRegretTesting::DEFAULT_LAMBDA,
    };
    SimConfig::new(
        entry_deterrence(),
        vec![spec.clone(), spec],
        frames * ExperimentalRegretTesting::DEFAULT_FRAME_LEN,
        seed,
    )
    .with_record(RecordMode::Summary)
}

/// Joint view of one frame across all players.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRow {
    pub frame: u64,
    pub t_end: u64,
    /// Mixed action each player used during the frame.
    pub strategies: Vec<Vec<f64>>,
    pub max_regrets: Vec<f64>,
    pub decisions: Vec<FrameDecision>,
    /// Largest unilateral gain against the frame's mixed profile.
    pub nash_gap: f64,
}

impl FrameRow {
    pub fn low_regret(&self, threshold: f64) -> bool {
        self.max_regrets.iter().all(|r| *r < threshold)
    }

    pub fn any_redraw(&self) -> bool {
        self.decisions.iter().any(|d| d.is_redraw())
    }
}

/// Pairs the frame-end events of all players. Frames some player has not
/// closed are dropped.
pub fn frame_rows(trace: &Trace) -> Vec<FrameRow> {
    let game = trace.game();
    let n = game.num_players();
    let mut partial: Vec<Vec<Option<(u64, Vec<f64>, f64, FrameDecision)>>> = Vec::new();
    for e in trace.events() {
        if let RuleEvent::FrameEnd {
            frame,
            strategy,
            regrets,
            decision,
            ..
        } = &e.event
        {
            let k = *frame as usize - 1;
            if partial.len() <= k {
                partial.resize(k + 1, vec![None; n]);
            }
            let max = regrets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            partial[k][e.player] = Some((e.t, strategy.clone(), max, *decision));
        }
    }
    partial
        .into_iter()
        .enumerate()
        .map_while(|(k, players)| {
            let players: Vec<_> = players.into_iter().collect::<Option<Vec<_>>>()?;
            let strategies: Vec<Vec<f64>> = players.iter().map(|p| p.1.clone()).collect();
            let actions = strategies
                .iter()
                .map(|x| MixedAction::new(x.clone()))
                .collect::<Result<Vec<_>, _>>()
                .ok()?;
            let profile = MixedProfile::new(game, actions).ok()?;
            Some(FrameRow {
                frame: k as u64 + 1,
                t_end: players.iter().map(|p| p.0).max().unwrap_or(0),
                max_regrets: players.iter().map(|p| p.2).collect(),
                decisions: players.iter().map(|p| p.3).collect(),
                nash_gap: game.nash_gap(&profile).ok()?,
                strategies,
            })
        })
        .collect()
}

/// Index of the first frame that starts `CAPTURE_RUN` consecutive
/// low-regret frames.
pub fn first_capture(rows: &[FrameRow], threshold: f64) -> Option<usize> {
    rows.windows(CAPTURE_RUN)
        .position(|w| w.iter().all(|r| r.low_regret(threshold)))
}

pub fn ert_frames(seed: u64, frames: u64) -> Result<Vec<FrameRow>, EngineError> {
    Ok(frame_rows(&crate::engine::run(&ert_config(frames, seed))?))
}

pub fn write_frames<W: Write>(
    rows: &[FrameRow],
    seed: u64,
    frames: u64,
    mut out: W,
) -> Result<(), EngineError> {
    let capture = first_capture(rows, ExperimentalRegretTesting::DEFAULT_THRESHOLD);
    echo(
        &mut out,
        &[
            ("preset", "ert".into()),
            ("game", "entry-deterrence".into()),
            (
                "rules",
                ert_config(frames, seed).rules[0].to_string() + " x2",
            ),
            ("frames", frames.to_string()),
            ("seed", seed.to_string()),
            ("prng", PRNG_IDENTITY.into()),
            (
                "first_capture",
                capture.map_or_else(|| "none".to_string(), |k| (k + 1).to_string()),
            ),
        ],
    )
    .map_err(export)?;
    let mut w = csv::Writer::from_writer(out);
    let n = rows.first().map_or(2, |r| r.strategies.len());
    let mut cols = vec!["frame".to_string(), "t_end".to_string()];
    for (i, x) in rows
        .first()
        .map(|r| r.strategies.clone())
        .unwrap_or_default()
        .iter()
        .enumerate()
    {
        cols.extend((1..=x.len()).map(|k| format!("x{}_{k}", i + 1)));
    }
    cols.extend((1..=n).map(|i| format!("regret_{i}")));
    cols.extend((1..=n).map(|i| format!("decision_{i}")));
    cols.push("nash_gap".into());
    w.write_record(&cols).map_err(export)?;
    for r in rows {
        let mut row = vec![r.frame.to_string(), r.t_end.to_string()];
        row.extend(r.strategies.iter().flatten().map(|v| format!("{v:.6}")));
        row.extend(r.max_regrets.iter().map(|v| format!("{v:.6}")));
        row.extend(r.decisions.iter().map(|d| d.label().to_string()));
        row.push(format!("{:.6}", r.nash_gap));
        w.write_record(&row).map_err(export)?;
    }
    w.flush().map_err(export)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_rows_carry_reference_columns() {
        let rows = table1(3, 4, 2000).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.reference).collect::<Vec<_>>(),
            vec![[0.471, 0.529], [0.718, 0.282], [0.125, 0.875]]
        );
        for r in &rows {
            assert!((r.total.mean - r.p1.mean - r.p2.mean).abs() < 1e-12);
        }
        let mut buf = Vec::new();
        write_table1(&rows, 3, 4, 2000, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# seed = 3"));
        assert!(text.contains(
            "phi,coefficients,freq_p1,freq_p2,freq_total,sd_p1,sd_p2,reference_p1,reference_p2"
        ));
        assert!(text
            .lines()
            .any(|l| l.starts_with("phi2,") && l.ends_with(",0.718,0.282")));
    }

    #[test]
    fn per_run_equilibrium_frequencies_sum_below_one() {
        let cfg = table1_config(phi_of(TABLE1_PHIS[0].1), 3000, 8);
        let report = batch(&cfg, 6).unwrap();
        assert!(report
            .per_run
            .iter()
            .all(|r| r.nash_frequencies.iter().sum::<f64>() <= 1.0 + 1e-12));
    }

    #[test]
    fn mp_rm_series_shapes() {
        let s = mp_rm(2, 5000, 200, 100).unwrap();
        let last = s.cumulative.last().unwrap();
        assert_eq!(last.t, 5000);
        assert!((last.joint.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(s.windows.first().unwrap().t, 200);
        assert_eq!(s.windows.len(), 49);
    }

    #[test]
    fn frame_rows_pair_players() {
        let spec: RuleSpec = "ert[T=100]".parse().unwrap();
        let cfg = SimConfig::new(entry_deterrence(), vec![spec.clone(), spec], 1050, 4);
        let rows = frame_rows(&crate::engine::run(&cfg).unwrap());
        assert_eq!(rows.len(), 10);
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r.frame, k as u64 + 1);
            assert_eq!(r.t_end, 100 * (k as u64 + 1));
            assert_eq!(r.strategies.len(), 2);
            assert!(r.nash_gap >= 0.0);
        }
        let mut buf = Vec::new();
        write_frames(&rows, 4, 10, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains(
            "frame,t_end,x1_1,x1_2,x2_1,x2_2,regret_1,regret_2,decision_1,decision_2,nash_gap"
        ));
    }
}
