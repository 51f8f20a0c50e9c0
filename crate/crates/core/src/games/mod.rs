//! Finite normal-form games and equilibrium verifiers.
//!
//! Payoffs are stored densely, one `n`-vector per pure profile, with profiles
//! in lexicographic order and player 1's action varying fastest. Actions are
//! 0-based in the API and 1-based wherever they are printed or parsed.

pub mod builtin;
mod dist;
pub mod io;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use dist::{JointDistribution, MixedAction, MixedProfile, PROB_TOL, RENORMALIZE_TOL};

/// Largest player count the subset scan of [`Game::is_interdependent`] accepts.
pub const MAX_INTERDEPENDENCE_PLAYERS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("a game needs at least 2 players, got {0}")]
    TooFewPlayers(usize),
    #[error("player {player} needs at least 2 actions, got {found}")]
    TooFewActions { player: usize, found: usize },
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("payoff entry for profile #{profile} (player {player}) is not finite")]
    NonFinitePayoff { profile: usize, player: usize },
    #[error("action {action} of player {player} is out of range 1..={max}")]
    ActionOutOfRange {
        player: usize,
        action: usize,
        max: usize,
    },
    #[error("player index {0} is out of range")]
    PlayerOutOfRange(usize),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("interdependence scan refuses {0} players (limit {MAX_INTERDEPENDENCE_PLAYERS})")]
    Capacity(usize),
    #[error("unknown builtin game `{0}`")]
    UnknownBuiltin(String),
    #[error("{0}")]
    Parse(String),
}

/// A pure action profile, one 0-based action index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureProfile(pub Vec<usize>);

impl PureProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        Self(actions)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The same profile with player `i` switched to `action`.
    pub fn with(&self, i: usize, action: usize) -> Self {
        let mut v = self.0.clone();
        v[i] = action;
        Self(v)
    }
}

impl std::ops::Index<usize> for PureProfile {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Formats 1-based, e.g. `(1,2)`.
impl fmt::Display for PureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a + 1)?;
        }
        write!(f, ")")
    }
}

/// Parses 1-based comma-separated actions, with or without parentheses.
impl FromStr for PureProfile {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let actions = body
            .split(',')
            .map(|tok| {
                let a: usize = tok.trim().parse().map_err(|_| {
                    GameError::Parse(format!("bad action `{}` in profile `{s}`", tok.trim()))
                })?;
                if a == 0 {
                    return Err(GameError::Parse(format!(
                        "actions are 1-based; got 0 in `{s}`"
                    )));
                }
                Ok(a - 1)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self(actions))
    }
}

/// A finite normal-form game. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    name: Option<String>,
    actions: Vec<usize>,
    strides: Vec<usize>,
    num_profiles: usize,
    // num_profiles * n, profile-major
    payoffs: Vec<f64>,
    bounds: Vec<f64>,
}

impl Game {
    /// `payoffs[k]` is the payoff vector of the `k`-th profile in lexicographic
    /// order (player 1 fastest).
    pub fn new(actions: Vec<usize>, payoffs: Vec<Vec<f64>>) -> Result<Self, GameError> {
        let n = actions.len();
        if n < 2 {
            return Err(GameError::TooFewPlayers(n));
        }
        if let Some((player, &found)) = actions.iter().enumerate().find(|(_, m)| **m < 2) {
            return Err(GameError::TooFewActions {
                player: player + 1,
                found,
            });
        }
        let mut strides = Vec::with_capacity(n);
        let mut num_profiles = 1usize;
        for &m in &actions {
            strides.push(num_profiles);
            num_profiles = num_profiles
                .checked_mul(m)
                .ok_or_else(|| GameError::InvalidParameter("profile count overflows".into()))?;
        }
        if payoffs.len() != num_profiles {
            return Err(GameError::DimensionMismatch {
                what: "payoff entries",
                expected: num_profiles,
                found: payoffs.len(),
            });
        }
        let mut flat = Vec::with_capacity(num_profiles * n);
        for (k, v) in payoffs.iter().enumerate() {
            if v.len() != n {
                return Err(GameError::DimensionMismatch {
                    what: "payoff vector length",
                    expected: n,
                    found: v.len(),
                });
            }
            if let Some(i) = v.iter().position(|p| !p.is_finite()) {
                return Err(GameError::NonFinitePayoff {
                    profile: k,
                    player: i + 1,
                });
            }
            flat.extend_from_slice(v);
        }
        let mut bounds = vec![0.0f64; n];
        for row in flat.chunks_exact(n) {
            for (b, p) in bounds.iter_mut().zip(row) {
                *b = b.max(p.abs());
            }
        }
        Ok(Self {
            name: None,
            actions,
            strides,
            num_profiles,
            payoffs: flat,
            bounds,
        })
    }

    /// Builds a game by evaluating `f` on every profile.
    pub fn from_fn<F>(actions: Vec<usize>, mut f: F) -> Result<Self, GameError>
    where
        F: FnMut(&PureProfile) -> Vec<f64>,
    {
        let total: usize = actions.iter().product();
        let payoffs = (0..total)
            .map(|idx| f(&profile_from_index(&actions, idx)))
            .collect();
        Self::new(actions, payoffs)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn num_actions(&self, i: usize) -> usize {
        self.actions[i]
    }

    pub fn num_profiles(&self) -> usize {
        self.num_profiles
    }

    /// Largest absolute payoff of player `i` (the bound `M_i`).
    pub fn payoff_bound(&self, i: usize) -> f64 {
        self.bounds[i]
    }

    pub fn payoff_bounds(&self) -> &[f64] {
        &self.bounds
    }

    fn check_len(&self, s: &PureProfile) -> Result<(), GameError> {
        if s.len() != self.num_players() {
            return Err(GameError::DimensionMismatch {
                what: "profile length",
                expected: self.num_players(),
                found: s.len(),
            });
        }
        Ok(())
    }

    pub fn check_profile(&self, s: &PureProfile) -> Result<(), GameError> {
        self.check_len(s)?;
        for (i, (&a, &m)) in s.iter().zip(&self.actions).enumerate() {
            if a >= m {
                return Err(GameError::ActionOutOfRange {
                    player: i + 1,
                    action: a + 1,
                    max: m,
                });
            }
        }
        Ok(())
    }

    pub fn check_player(&self, i: usize) -> Result<(), GameError> {
        if i >= self.num_players() {
            return Err(GameError::PlayerOutOfRange(i));
        }
        Ok(())
    }

    pub fn index_of(&self, s: &PureProfile) -> Result<usize, GameError> {
        self.check_profile(s)?;
        Ok(self.index_unchecked(s.as_slice()))
    }

    #[inline]
    pub fn index_unchecked(&self, s: &[usize]) -> usize {
        s.iter().zip(&self.strides).map(|(a, st)| a * st).sum()
    }

    pub fn profile_at(&self, idx: usize) -> PureProfile {
        profile_from_index(&self.actions, idx)
    }

    /// Player `i`'s action in the profile with index `idx`.
    #[inline]
    pub fn action_at(&self, idx: usize, i: usize) -> usize {
        (idx / self.strides[i]) % self.actions[i]
    }

    /// Index of the profile obtained from `idx` by switching player `i` to `action`.
    #[inline]
    pub fn deviate_index(&self, idx: usize, i: usize, action: usize) -> usize {
        let current = self.action_at(idx, i);
        idx - current * self.strides[i] + action * self.strides[i]
    }

    #[inline]
    pub fn payoff_at(&self, idx: usize, i: usize) -> f64 {
        self.payoffs[idx * self.actions.len() + i]
    }

    #[inline]
    pub fn payoffs_at(&self, idx: usize) -> &[f64] {
        let n = self.actions.len();
        &self.payoffs[idx * n..(idx + 1) * n]
    }

    pub fn profiles(&self) -> impl Iterator<Item = PureProfile> + '_ {
        (0..self.num_profiles).map(move |idx| self.profile_at(idx))
    }

    /// The payoff vector of a pure profile.
    pub fn payoff(&self, s: &PureProfile) -> Result<&[f64], GameError> {
        Ok(self.payoffs_at(self.index_of(s)?))
    }

    /// Expected payoff of player `i` under independent mixing.
    pub fn expected_payoff(&self, x: &MixedProfile, i: usize) -> Result<f64, GameError> {
        self.check_player(i)?;
        self.check_mixed(x)?;
        Ok((0..self.num_profiles)
            .map(|idx| {
                let w: f64 = (0..self.num_players())
                    .map(|j| x.get(j).probs()[self.action_at(idx, j)])
                    .product();
                w * self.payoff_at(idx, i)
            })
            .sum())
    }

    fn check_mixed(&self, x: &MixedProfile) -> Result<(), GameError> {
        MixedProfile::new(self, x.iter().cloned().collect()).map(|_| ())
    }

    /// All maximizers of player `i`'s payoff against the others' actions in
    /// `s` (player `i`'s own entry is ignored). Never empty.
    pub fn best_reply_set(&self, i: usize, s: &PureProfile) -> Result<Vec<usize>, GameError> {
        self.check_player(i)?;
        self.check_len(s)?;
        let base = self.index_of(&s.with(i, 0))?;
        let values: Vec<f64> = (0..self.num_actions(i))
            .map(|k| self.payoff_at(self.deviate_index(base, i, k), i))
            .collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok((0..values.len()).filter(|&k| values[k] == best).collect())
    }

    /// Whether `action` is an `eps`-best reply of player `i` to the others' actions in `s`.
    pub fn is_eps_best_reply(
        &self,
        i: usize,
        action: usize,
        s: &PureProfile,
        eps: f64,
    ) -> Result<bool, GameError> {
        check_eps(eps)?;
        self.check_player(i)?;
        self.check_len(s)?;
        let idx = self.index_of(&s.with(i, action))?;
        let own = self.payoff_at(idx, i);
        Ok((0..self.num_actions(i))
            .all(|k| own >= self.payoff_at(self.deviate_index(idx, i, k), i) - eps))
    }

    pub fn is_pure_nash(&self, s: &PureProfile, eps: f64) -> Result<bool, GameError> {
        check_eps(eps)?;
        let idx = self.index_of(s)?;
        Ok(self.pure_nash_at(idx, eps))
    }

    pub(crate) fn pure_nash_at(&self, idx: usize, eps: f64) -> bool {
        (0..self.num_players()).all(|i| {
            let own = self.payoff_at(idx, i);
            (0..self.num_actions(i))
                .all(|k| own >= self.payoff_at(self.deviate_index(idx, i, k), i) - eps)
        })
    }

    /// All pure Nash equilibria (exact).
    pub fn pure_nash_equilibria(&self) -> Vec<PureProfile> {
        (0..self.num_profiles)
            .filter(|&idx| self.pure_nash_at(idx, 0.0))
            .map(|idx| self.profile_at(idx))
            .collect()
    }

    /// Expected payoff of every pure deviation of player `i` against `x_{-i}`.
    pub fn deviation_payoffs(&self, x: &MixedProfile, i: usize) -> Vec<f64> {
        let mut dev = vec![0.0; self.num_actions(i)];
        for idx in 0..self.num_profiles {
            let w: f64 = (0..self.num_players())
                .filter(|&j| j != i)
                .map(|j| x.get(j).probs()[self.action_at(idx, j)])
                .product();
            if w != 0.0 {
                dev[self.action_at(idx, i)] += w * self.payoff_at(idx, i);
            }
        }
        dev
    }

    /// Largest gain any player gets from a pure deviation against `x`.
    pub fn nash_gap(&self, x: &MixedProfile) -> Result<f64, GameError> {
        self.check_mixed(x)?;
        let mut gap = 0.0f64;
        for i in 0..self.num_players() {
            let dev = self.deviation_payoffs(x, i);
            let own: f64 = dev.iter().zip(x.get(i).probs()).map(|(v, p)| v * p).sum();
            let best = dev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            gap = gap.max(best - own);
        }
        Ok(gap)
    }

    pub fn is_mixed_eps_nash(&self, x: &MixedProfile, eps: f64) -> Result<bool, GameError> {
        check_eps(eps)?;
        Ok(self.nash_gap(x)? <= eps)
    }

    /// Largest left-hand side of the correlated-equilibrium inequality system,
    /// `sum_{s: s_i = j} q(s) (pi_i(j', s_-i) - pi_i(s))`, floored at zero.
    pub fn min_ce_eps(&self, q: &JointDistribution) -> Result<f64, GameError> {
        if q.probs().len() != self.num_profiles {
            return Err(GameError::DimensionMismatch {
                what: "joint distribution entries",
                expected: self.num_profiles,
                found: q.probs().len(),
            });
        }
        let mut worst = 0.0f64;
        for i in 0..self.num_players() {
            let m = self.num_actions(i);
            // gains[j * m + j'] for source action j, replacement j'
            let mut gains = vec![0.0; m * m];
            for (idx, &p) in q.probs().iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let j = self.action_at(idx, i);
                let own = self.payoff_at(idx, i);
                for alt in 0..m {
                    gains[j * m + alt] +=
                        p * (self.payoff_at(self.deviate_index(idx, i, alt), i) - own);
                }
            }
            worst = gains.iter().copied().fold(worst, f64::max);
        }
        Ok(worst)
    }

    pub fn is_correlated_eps_eq(&self, q: &JointDistribution, eps: f64) -> Result<bool, GameError> {
        check_eps(eps)?;
        Ok(self.min_ce_eps(q)? <= eps)
    }

    /// Whether every nonempty proper subset of players can, by a joint
    /// deviation, change the payoff of some player outside it.
    pub fn is_interdependent(&self) -> Result<bool, GameError> {
        let n = self.num_players();
        if n > MAX_INTERDEPENDENCE_PLAYERS {
            return Err(GameError::Capacity(n));
        }
        let full = (1u32 << n) - 1;
        Ok((1..full).all(|mask| self.subset_influences_outsider(mask)))
    }

    fn subset_influences_outsider(&self, mask: u32) -> bool {
        let n = self.num_players();
        let inside = |j: usize| mask & (1 << j) != 0;
        (0..n).filter(|&i| !inside(i)).any(|i| {
            // first payoff seen for each fixed complement profile
            let mut seen: Vec<Option<f64>> = vec![None; self.num_profiles];
            (0..self.num_profiles).any(|idx| {
                let key: usize = (0..n)
                    .filter(|&j| !inside(j))
                    .map(|j| self.action_at(idx, j) * self.strides[j])
                    .sum();
                let v = self.payoff_at(idx, i);
                match seen[key] {
                    None => {
                        seen[key] = Some(v);
                        false
                    }
                    Some(first) => first != v,
                }
            })
        })
    }

    /// No two own actions of any player yield payoffs within `tol` of each
    /// other against any fixed opponents' profile.
    pub fn is_generic(&self, tol: f64) -> bool {
        (0..self.num_players()).all(|i| {
            (0..self.num_profiles)
                .filter(|&idx| self.action_at(idx, i) == 0)
                .all(|base| {
                    let vals: Vec<f64> = (0..self.num_actions(i))
                        .map(|k| self.payoff_at(self.deviate_index(base, i, k), i))
                        .collect();
                    vals.iter()
                        .enumerate()
                        .all(|(a, va)| vals[a + 1..].iter().all(|vb| (va - vb).abs() > tol))
                })
        })
    }

    pub fn social_welfare(&self, s: &PureProfile) -> Result<f64, GameError> {
        Ok(self.payoff(s)?.iter().sum())
    }
}

fn profile_from_index(actions: &[usize], mut idx: usize) -> PureProfile {
    let mut v = Vec::with_capacity(actions.len());
    for &m in actions {
        v.push(idx % m);
        idx /= m;
    }
    PureProfile(v)
}

fn check_eps(eps: f64) -> Result<(), GameError> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(GameError::InvalidParameter(format!(
            "eps must be finite and >= 0, got {eps}"
        )));
    }
    Ok(())
}

/// Time bound for reaching a correlated `eps`-equilibrium with probability
/// at least `1 - delta`: `max_i 16 m_i n / eps^2 * ln(m_i n / delta)`.
pub fn ce_time_bound(n: usize, actions: &[usize], eps: f64, delta: f64) -> Result<f64, GameError> {
    if n < 2 {
        return Err(GameError::TooFewPlayers(n));
    }
    if actions.len() != n {
        return Err(GameError::DimensionMismatch {
            what: "action counts",
            expected: n,
            found: actions.len(),
        });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GameError::InvalidParameter(format!(
            "eps must lie in (0,1), got {eps}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GameError::InvalidParameter(format!(
            "delta must lie in (0,1), got {delta}"
        )));
    }
    let nf = n as f64;
    Ok(actions
        .iter()
        .map(|&m| {
            let mn = m as f64 * nf;
            16.0 * mn / (eps * eps) * (mn / delta).ln()
        })
        .fold(f64::NEG_INFINITY, f64::max))
}
