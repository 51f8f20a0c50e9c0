//! Monte-Carlo batches over derived per-run seeds.

use rayon::prelude::*;
use serde::Serialize;

use crate::games::PureProfile;
use crate::rng::{Streams, PRNG_IDENTITY};
use crate::rules::RuleEvent;

use super::{run, EngineError, SimConfig, Trace};

/// Diagnostics of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub run: u64,
    pub seed: u64,
    pub periods: u64,
    pub min_ce_eps: f64,
    /// Frequency of each pure equilibrium, in the order of the report's targets.
    pub nash_frequencies: Vec<f64>,
    pub nash_total: f64,
    pub final_profile: String,
    pub final_is_pure_nash: bool,
    /// First period of the final constant stretch.
    pub constant_since: u64,
    pub redraws: u64,
}

impl RunSummary {
    pub fn from_trace(run: u64, trace: &Trace, targets: &[PureProfile]) -> Self {
        let game = trace.game();
        let nash_frequencies: Vec<f64> = targets
            .iter()
            .map(|s| trace.frequency_of(s).expect("target fits the game"))
            .collect();
        let last = trace
            .final_profile()
            .expect("runs have at least one period");
        let redraws = trace
            .events()
            .iter()
            .filter(
                |e| matches!(e.event, RuleEvent::FrameEnd { decision, .. } if decision.is_redraw()),
            )
            .count() as u64;
        Self {
            run,
            seed: trace.seed(),
            periods: trace.len(),
            min_ce_eps: trace.min_ce_eps(),
            nash_total: nash_frequencies.iter().fold(0.0, |a, b| a + b),
            nash_frequencies,
            final_is_pure_nash: game
                .is_pure_nash(&last, 0.0)
                .expect("profile fits the game"),
            final_profile: last.to_string(),
            constant_since: trace.constant_since(),
            redraws,
        }
    }
}

/// Mean, sample standard deviation and range of one diagnostic across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub name: String,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

impl Aggregate {
    pub fn of(name: impl Into<String>, values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            name: name.into(),
            mean,
            stddev: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub prng: String,
    pub game: String,
    pub rules: Vec<String>,
    pub horizon: u64,
    pub master_seed: u64,
    pub runs: u64,
    pub targets: Vec<String>,
    pub per_run: Vec<RunSummary>,
    pub aggregates: Vec<Aggregate>,
}

impl BatchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn aggregate(&self, name: &str) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.name == name)
    }
}

/// Runs `runs` copies of `config`, run `r` seeded with `run_seed(r)` of the
/// master seed, and maps each trace through `f`. Output is in run order
/// regardless of scheduling.
pub fn batch_map<T, F>(config: &SimConfig, runs: u64, f: F) -> Result<Vec<T>, EngineError>
where
    T: Send,
    F: Fn(u64, &Trace) -> T + Sync,
{
    config.validate()?;
    if runs == 0 {
        return Err(EngineError::Config("need at least one run".into()));
    }
    let streams = Streams::new(config.seed);
    (0..runs)
        .into_par_iter()
        .map(|r| {
            let cfg = config.clone().with_seed(streams.run_seed(r));
            run(&cfg).map(|trace| f(r, &trace))
        })
        .collect()
}

/// Batch with the standard per-run diagnostics.
pub fn batch(config: &SimConfig, runs: u64) -> Result<BatchReport, EngineError> {
    let targets = config.game.pure_nash_equilibria();
    let per_run = batch_map(config, runs, |r, trace| {
        RunSummary::from_trace(r, trace, &targets)
    })?;
    let column = |f: &dyn Fn(&RunSummary) -> f64| per_run.iter().map(f).collect::<Vec<f64>>();
    let mut aggregates = vec![Aggregate::of("min_ce_eps", &column(&|s| s.min_ce_eps))];
    for (k, target) in targets.iter().enumerate() {
        aggregates.push(Aggregate::of(
            format!("freq{target}"),
            &column(&|s| s.nash_frequencies[k]),
        ));
    }
    aggregates.push(Aggregate::of("nash_total", &column(&|s| s.nash_total)));
    aggregates.push(Aggregate::of(
        "constant_since",
        &column(&|s| s.constant_since as f64),
    ));
    aggregates.push(Aggregate::of(
        "final_is_pure_nash",
        &column(&|s| f64::from(u8::from(s.final_is_pure_nash))),
    ));
    Ok(BatchReport {
        prng: PRNG_IDENTITY.to_string(),
        game: config.game.name().unwrap_or("unnamed").to_string(),
        rules: config
            .resolved_rules()
            .iter()
            .map(|r| r.to_string())
            .collect(),
        horizon: config.horizon,
        master_seed: config.seed,
        runs,
        targets: targets.iter().map(|t| t.to_string()).collect(),
        per_run,
        aggregates,
    })
}
