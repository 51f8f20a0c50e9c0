//! Named games.

use rand::Rng;

use super::{Game, GameError};
use crate::rng::{Purpose, Streams};

/// Separation used when a random game is re-drawn until generic.
const RANDOM_GENERIC_TOL: f64 = 1e-9;

pub const BUILTIN_NAMES: &[&str] = &[
    "matching-pennies",
    "entry-deterrence",
    "battle-of-sexes",
    "coordination",
    "random",
];

fn bimatrix(name: &str, cells: [[(f64, f64); 2]; 2]) -> Game {
    // lexicographic, row player fastest: (1,1) (2,1) (1,2) (2,2)
    let payoffs = vec![
        vec![cells[0][0].0, cells[0][0].1],
        vec![cells[1][0].0, cells[1][0].1],
        vec![cells[0][1].0, cells[0][1].1],
        vec![cells[1][1].0, cells[1][1].1],
    ];
    Game::new(vec![2, 2], payoffs)
        .expect("builtin bimatrix is valid")
        .with_name(name)
}

/// Row player wins +1 when the actions match, -1 otherwise.
pub fn matching_pennies() -> Game {
    bimatrix(
        "matching-pennies",
        [[(1.0, -1.0), (-1.0, 1.0)], [(-1.0, 1.0), (1.0, -1.0)]],
    )
}

/// `(2,2) (0,0) / (1,4) (1,4)`: pure equilibria at (1,1) and (2,2) plus a
/// continuum where the row player stays out.
pub fn entry_deterrence() -> Game {
    bimatrix(
        "entry-deterrence",
        [[(2.0, 2.0), (0.0, 0.0)], [(1.0, 4.0), (1.0, 4.0)]],
    )
}

pub fn battle_of_sexes() -> Game {
    bimatrix(
        "battle-of-sexes",
        [[(2.0, 1.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 2.0)]],
    )
}

pub fn coordination() -> Game {
    bimatrix(
        "coordination",
        [[(2.0, 2.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 1.0)]],
    )
}

/// I.i.d. uniform payoffs on `[lo, hi)`, re-drawn until the game is generic.
pub fn random(n: usize, actions: &[usize], seed: u64, lo: f64, hi: f64) -> Result<Game, GameError> {
    if actions.len() != n {
        return Err(GameError::DimensionMismatch {
            what: "action counts",
            expected: n,
            found: actions.len(),
        });
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(GameError::InvalidParameter(format!(
            "need finite lo < hi, got [{lo}, {hi})"
        )));
    }
    let mut rng = Streams::new(seed).stream(Purpose::Auxiliary, 0);
    loop {
        let game = Game::from_fn(actions.to_vec(), |_| {
            (0..n).map(|_| rng.random_range(lo..hi)).collect()
        })?;
        if game.is_generic(RANDOM_GENERIC_TOL) {
            let label = actions
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join("x");
            return Ok(game.with_name(format!(
                "random[n={n},m={label},seed={seed},lo={lo},hi={hi}]"
            )));
        }
    }
}

/// Resolves a builtin name. `random[n=..,m=AxB..,seed=..,lo=..,hi=..]`
/// selects a random game; `lo`/`hi` default to 0/1.
pub fn builtin(name: &str) -> Result<Game, GameError> {
    let key = name.trim().to_ascii_lowercase().replace('_', "-");
    match key.as_str() {
        "matching-pennies" => Ok(matching_pennies()),
        "entry-deterrence" => Ok(entry_deterrence()),
        "battle-of-sexes" => Ok(battle_of_sexes()),
        "coordination" => Ok(coordination()),
        _ if key.starts_with("random") => parse_random(&key),
        _ => Err(GameError::UnknownBuiltin(name.to_string())),
    }
}

fn parse_random(key: &str) -> Result<Game, GameError> {
    let body = key
        .strip_prefix("random")
        .unwrap_or_default()
        .trim()
        .trim_start_matches(['[', '('])
        .trim_end_matches([']', ')']);
    let bad = |msg: String| GameError::Parse(format!("random game `{key}`: {msg}"));
    let (mut n, mut m, mut seed, mut lo, mut hi) = (None, None, 0u64, 0.0, 1.0);
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
        let v = v.trim();
        match k.trim() {
            "n" => {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|_| bad(format!("bad n `{v}`")))?,
                )
            }
            "m" => {
                m = Some(
                    v.split('x')
                        .map(|x| {
                            x.parse::<usize>()
                                .map_err(|_| bad(format!("bad action count `{x}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "seed" => seed = v.parse().map_err(|_| bad(format!("bad seed `{v}`")))?,
            "lo" => lo = v.parse().map_err(|_| bad(format!("bad lo `{v}`")))?,
            "hi" => hi = v.parse().map_err(|_| bad(format!("bad hi `{v}`")))?,
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    let m = m.unwrap_or_else(|| vec![2; n.unwrap_or(2)]);
    let n = n.unwrap_or(m.len());
    let m = if m.len() == 1 && n > 1 {
        vec![m[0]; n]
    } else {
        m
    };
    random(n, &m, seed, lo, hi)
}
