use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::{Game, GameError, PureProfile};

/// Tolerance on the total mass of a probability vector.
pub const PROB_TOL: f64 = 1e-9;
/// Vectors whose mass is off by less than this are renormalized when loaded.
pub const RENORMALIZE_TOL: f64 = 1e-6;

fn check_probs(probs: &[f64]) -> Result<(), GameError> {
    if probs.is_empty() {
        return Err(GameError::InvalidDistribution(
            "empty probability vector".into(),
        ));
    }
    if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(GameError::InvalidDistribution(format!(
            "component {p} is negative or not finite"
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(GameError::InvalidDistribution(format!(
            "components sum to {total}, not 1"
        )));
    }
    Ok(())
}

fn renormalize(mut probs: Vec<f64>) -> Result<Vec<f64>, GameError> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return check_probs(&probs).map(|_| probs);
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > RENORMALIZE_TOL {
        return Err(GameError::InvalidDistribution(format!(
            "components sum to {total}, not 1"
        )));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(probs)
}

/// A probability vector over one player's actions.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedAction {
    probs: Vec<f64>,
}

impl MixedAction {
    pub fn new(probs: Vec<f64>) -> Result<Self, GameError> {
        check_probs(&probs)?;
        Ok(Self { probs })
    }

    /// Accepts vectors whose mass is within `RENORMALIZE_TOL` of one and rescales them.
    pub fn new_renormalized(probs: Vec<f64>) -> Result<Self, GameError> {
        Ok(Self {
            probs: renormalize(probs)?,
        })
    }

    pub fn uniform(m: usize) -> Self {
        Self {
            probs: vec![1.0 / m as f64; m],
        }
    }

    pub fn pure(m: usize, action: usize) -> Self {
        let mut probs = vec![0.0; m];
        probs[action] = 1.0;
        Self { probs }
    }

    /// Uniform draw from the simplex (flat Dirichlet).
    pub fn random_uniform<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut probs: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub(crate) fn probs_mut(&mut self) -> &mut [f64] {
        &mut self.probs
    }

    /// Re-checks the simplex invariant; rules call this in debug assertions.
    pub fn is_valid(&self) -> bool {
        check_probs(&self.probs).is_ok()
    }

    /// Inverse-CDF draw of an action index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (k, p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return k;
            }
        }
        // rounding left u above the accumulated mass
        self.probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
    }

    pub fn max_abs_diff(&self, other: &MixedAction) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// One mixed action per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile {
    actions: Vec<MixedAction>,
}

impl MixedProfile {
    pub fn new(game: &Game, actions: Vec<MixedAction>) -> Result<Self, GameError> {
        if actions.len() != game.num_players() {
            return Err(GameError::DimensionMismatch {
                what: "mixed profile players",
                expected: game.num_players(),
                found: actions.len(),
            });
        }
        for (i, x) in actions.iter().enumerate() {
            if x.len() != game.num_actions(i) {
                return Err(GameError::DimensionMismatch {
                    what: "mixed action length",
                    expected: game.num_actions(i),
                    found: x.len(),
                });
            }
        }
        Ok(Self { actions })
    }

    pub fn pure(game: &Game, profile: &PureProfile) -> Result<Self, GameError> {
        game.check_profile(profile)?;
        let actions = profile
            .iter()
            .enumerate()
            .map(|(i, &a)| MixedAction::pure(game.num_actions(i), a))
            .collect();
        Ok(Self { actions })
    }

    pub fn uniform(game: &Game) -> Self {
        Self {
            actions: game
                .actions()
                .iter()
                .map(|&m| MixedAction::uniform(m))
                .collect(),
        }
    }

    pub fn get(&self, i: usize) -> &MixedAction {
        &self.actions[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &MixedAction> {
        self.actions.iter()
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

/// A probability for each pure profile, in the game's lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(game: &Game, probs: Vec<f64>) -> Result<Self, GameError> {
        Self::check_len(game, &probs)?;
        check_probs(&probs)?;
        Ok(Self { probs })
    }

    pub fn new_renormalized(game: &Game, probs: Vec<f64>) -> Result<Self, GameError> {
        Self::check_len(game, &probs)?;
        Ok(Self {
            probs: renormalize(probs)?,
        })
    }

    fn check_len(game: &Game, probs: &[f64]) -> Result<(), GameError> {
        if probs.len() != game.num_profiles() {
            return Err(GameError::DimensionMismatch {
                what: "joint distribution entries",
                expected: game.num_profiles(),
                found: probs.len(),
            });
        }
        Ok(())
    }

    /// Builds from integer counts; `counts` must not be all zero.
    pub fn from_counts(counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        assert!(total > 0, "empty count vector");
        let t = total as f64;
        Self {
            probs: counts.iter().map(|&c| c as f64 / t).collect(),
        }
    }

    pub fn point_mass(game: &Game, profile: &PureProfile) -> Result<Self, GameError> {
        let idx = game.index_of(profile)?;
        let mut probs = vec![0.0; game.num_profiles()];
        probs[idx] = 1.0;
        Ok(Self { probs })
    }

    pub fn uniform(game: &Game) -> Self {
        let n = game.num_profiles();
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// The product distribution of independent mixed actions.
    pub fn product(game: &Game, x: &MixedProfile) -> Self {
        let probs = game
            .profiles()
            .map(|s| {
                s.iter()
                    .enumerate()
                    .map(|(i, &a)| x.get(i).probs()[a])
                    .product()
            })
            .collect();
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, game: &Game, profile: &PureProfile) -> Result<f64, GameError> {
        Ok(self.probs[game.index_of(profile)?])
    }

    pub fn marginal(&self, game: &Game, player: usize) -> MixedAction {
        let mut probs = vec![0.0; game.num_actions(player)];
        for (idx, q) in self.probs.iter().enumerate() {
            probs[game.action_at(idx, player)] += q;
        }
        MixedAction { probs }
    }

    pub fn max_abs_diff(&self, other: &JointDistribution) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
