//! TOML game and distribution files.
//!
//! ```toml
//! name = "entry-deterrence"
//! players = 2
//! actions = [2, 2]
//! # one payoff vector per pure profile, player 1's action varying fastest
//! payoffs = [
//!   [2.0, 2.0], # (1,1)
//!   [1.0, 4.0], # (2,1)
//!   [0.0, 0.0], # (1,2)
//!   [1.0, 4.0], # (2,2)
//! ]
//! ```
//!
//! Distribution files carry either `joint = [...]` (one probability per
//! profile, same order) or `mixed = [[...], ...]` (one vector per player).

use std::fmt::Write as _;

use serde::Deserialize;

use super::{Game, GameError, JointDistribution, MixedAction, MixedProfile};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    name: Option<String>,
    players: usize,
    actions: Vec<usize>,
    payoffs: Vec<Vec<f64>>,
}

pub fn load_game(text: &str) -> Result<Game, GameError> {
    let doc: GameDoc =
        toml::from_str(text).map_err(|e| GameError::Parse(format!("game file: {e}")))?;
    if doc.actions.len() != doc.players {
        return Err(GameError::Parse(format!(
            "game file: field `actions` lists {} counts but `players` = {}",
            doc.actions.len(),
            doc.players
        )));
    }
    let expected: usize = doc.actions.iter().product();
    if doc.payoffs.len() != expected {
        return Err(GameError::Parse(format!(
            "game file: field `payoffs` has {} entries, expected {} (product of `actions`)",
            doc.payoffs.len(),
            expected
        )));
    }
    if let Some(k) = doc.payoffs.iter().position(|v| v.len() != doc.players) {
        return Err(GameError::Parse(format!(
            "game file: `payoffs` entry {} has {} values, expected {}",
            k + 1,
            doc.payoffs[k].len(),
            doc.players
        )));
    }
    let game = Game::new(doc.actions, doc.payoffs)?;
    Ok(match doc.name {
        Some(name) => game.with_name(name),
        None => game,
    })
}

pub fn save_game(game: &Game) -> String {
    let mut out = String::new();
    if let Some(name) = game.name() {
        let _ = writeln!(out, "name = {}", toml_string(name));
    }
    let _ = writeln!(out, "players = {}", game.num_players());
    let actions: Vec<String> = game.actions().iter().map(|m| m.to_string()).collect();
    let _ = writeln!(out, "actions = [{}]", actions.join(", "));
    let _ = writeln!(
        out,
        "# one payoff vector per pure profile, player 1's action varying fastest"
    );
    let _ = writeln!(out, "payoffs = [");
    for idx in 0..game.num_profiles() {
        let vals: Vec<String> = game
            .payoffs_at(idx)
            .iter()
            .map(|v| format_float(*v))
            .collect();
        let _ = writeln!(out, "  [{}], # {}", vals.join(", "), game.profile_at(idx));
    }
    let _ = writeln!(out, "]");
    out
}

fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    let s = format!("{v:?}");
    if s.contains(['.', 'e', 'E']) || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

/// A distribution read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Joint(JointDistribution),
    Mixed(MixedProfile),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistDoc {
    joint: Option<Vec<f64>>,
    mixed: Option<Vec<Vec<f64>>>,
}

/// Reads a distribution file for `game`. Mass within `RENORMALIZE_TOL` of one
/// is renormalized; anything further off is rejected.
pub fn load_distribution(text: &str, game: &Game) -> Result<DistributionSpec, GameError> {
    let doc: DistDoc =
        toml::from_str(text).map_err(|e| GameError::Parse(format!("distribution file: {e}")))?;
    match (doc.joint, doc.mixed) {
        (Some(joint), None) => Ok(DistributionSpec::Joint(
            JointDistribution::new_renormalized(game, joint)?,
        )),
        (None, Some(mixed)) => {
            let actions = mixed
                .into_iter()
                .map(MixedAction::new_renormalized)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(DistributionSpec::Mixed(MixedProfile::new(game, actions)?))
        }
        _ => Err(GameError::Parse(
            "distribution file: give exactly one of `joint` or `mixed`".into(),
        )),
    }
}
