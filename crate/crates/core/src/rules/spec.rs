//! Rule specification strings such as `ert[T=10000,rho=0.12,lambda=0.001]`.

use std::fmt;
use std::str::FromStr;

use crate::games::Game;
use crate::rng::StreamRng;

use super::{
    bad_param, default_modified_mu, default_mu, Alert, ExperimentalRegretTesting, FictitiousPlay,
    InfoClass, ModifiedRegretMatching, PayoffAlert, PhiFunction, PlayerContext, RegretMatching,
    RuleError, RuleInstance, SimplePure, TrialAndError, TwoRecall,
};

/// A rule kind with its parameters; `None` stands for a default resolved per player.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleSpec {
    RegretMatching {
        mu: Option<f64>,
    },
    ModifiedRm {
        gamma: f64,
        delta: f64,
        mu: Option<f64>,
    },
    Ert {
        frame_len: u64,
        threshold: f64,
        lambda: f64,
    },
    Alert {
        start_regime: u32,
    },
    PayoffAlert {
        per_action: usize,
        start_regime: u32,
    },
    TrialError {
        eps: f64,
        phi: PhiFunction,
    },
    Fictitious,
    SimplePure,
    TwoRecall,
}

pub const RULE_NAMES: &[&str] = &[
    RegretMatching::NAME,
    ModifiedRegretMatching::NAME,
    ExperimentalRegretTesting::NAME,
    Alert::NAME,
    PayoffAlert::NAME,
    TrialAndError::NAME,
    FictitiousPlay::NAME,
    SimplePure::NAME,
    TwoRecall::NAME,
];

impl RuleSpec {
    pub fn name(&self) -> &'static str {
        match self {
            RuleSpec::RegretMatching { .. } => RegretMatching::NAME,
            RuleSpec::ModifiedRm { .. } => ModifiedRegretMatching::NAME,
            RuleSpec::Ert { .. } => ExperimentalRegretTesting::NAME,
            RuleSpec::Alert { .. } => Alert::NAME,
            RuleSpec::PayoffAlert { .. } => PayoffAlert::NAME,
            RuleSpec::TrialError { .. } => TrialAndError::NAME,
            RuleSpec::Fictitious => FictitiousPlay::NAME,
            RuleSpec::SimplePure => SimplePure::NAME,
            RuleSpec::TwoRecall => TwoRecall::NAME,
        }
    }

    pub fn info_class(&self) -> InfoClass {
        match self {
            RuleSpec::ModifiedRm { .. }
            | RuleSpec::PayoffAlert { .. }
            | RuleSpec::TrialError { .. } => InfoClass::CompletelyUncoupled,
            _ => InfoClass::Uncoupled,
        }
    }

    /// Builds the rule for `ctx`, drawing its randomness from `rng`.
    pub fn build(&self, ctx: PlayerContext, mut rng: StreamRng) -> Result<RuleInstance, RuleError> {
        Ok(match *self {
            RuleSpec::RegretMatching { mu } => Box::new(RegretMatching::new(ctx, mu, &mut rng)?),
            RuleSpec::ModifiedRm { gamma, delta, mu } => Box::new(ModifiedRegretMatching::new(
                ctx, gamma, delta, mu, &mut rng,
            )?),
            RuleSpec::Ert {
                frame_len,
                threshold,
                lambda,
            } => Box::new(ExperimentalRegretTesting::new(
                ctx, frame_len, threshold, lambda, rng,
            )?),
            RuleSpec::Alert { start_regime } => Box::new(Alert::new(ctx, start_regime, rng)?),
            RuleSpec::PayoffAlert {
                per_action,
                start_regime,
            } => Box::new(PayoffAlert::new(ctx, per_action, start_regime, rng)?),
            RuleSpec::TrialError { eps, phi } => Box::new(TrialAndError::new(ctx, eps, phi, rng)?),
            RuleSpec::Fictitious => Box::new(FictitiousPlay::new(ctx, rng)?),
            RuleSpec::SimplePure => Box::new(SimplePure::new(ctx)?),
            RuleSpec::TwoRecall => Box::new(TwoRecall::new(ctx)?),
        })
    }

    /// Canonical spec with per-player defaults filled in.
    pub fn resolved(&self, game: &Game, player: usize) -> RuleSpec {
        let (bound, m) = (game.payoff_bound(player), game.num_actions(player));
        match *self {
            RuleSpec::RegretMatching { mu } => RuleSpec::RegretMatching {
                mu: Some(mu.unwrap_or_else(|| default_mu(bound, m))),
            },
            RuleSpec::ModifiedRm { gamma, delta, mu } => RuleSpec::ModifiedRm {
                gamma,
                delta,
                mu: Some(mu.unwrap_or_else(|| default_modified_mu(bound, m))),
            },
            ref other => other.clone(),
        }
    }
}

fn fmt_mu(mu: Option<f64>) -> String {
    mu.map_or_else(|| "auto".to_string(), |v| v.to_string())
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match self {
            RuleSpec::RegretMatching { mu } => write!(f, "{name}[mu={}]", fmt_mu(*mu)),
            RuleSpec::ModifiedRm { gamma, delta, mu } => {
                write!(f, "{name}[gamma={gamma},delta={delta},mu={}]", fmt_mu(*mu))
            }
            RuleSpec::Ert {
                frame_len,
                threshold,
                lambda,
            } => {
                write!(f, "{name}[T={frame_len},rho={threshold},lambda={lambda}]")
            }
            RuleSpec::Alert { start_regime } => write!(f, "{name}[l0={start_regime}]"),
            RuleSpec::PayoffAlert {
                per_action,
                start_regime,
            } => write!(f, "{name}[g={per_action},l0={start_regime}]"),
            RuleSpec::TrialError { eps, phi } => write!(f, "{name}[eps={eps},phi={phi}]"),
            RuleSpec::Fictitious | RuleSpec::SimplePure | RuleSpec::TwoRecall => f.write_str(name),
        }
    }
}

/// Splits a comma-separated list of specs, ignoring commas inside brackets.
pub fn split_rule_list(list: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (k, ch) in list.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(list[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(list[start..].trim());
    out
}

/// `key=value` pairs; a bare token continues the previous value, so
/// `phi=0.6,0.1,0.05,0.01,0.99` stays one entry.
fn parse_params(rule: &str, body: &str) -> Result<Vec<(String, String)>, RuleError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for token in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token.split_once('=') {
            Some((k, v)) => out.push((k.trim().to_string(), v.trim().to_string())),
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(token);
                }
                None => return Err(bad_param(rule, token, "expected key=value")),
            },
        }
    }
    Ok(out)
}

fn num<T: FromStr>(rule: &str, key: &str, v: &str) -> Result<T, RuleError> {
    v.parse()
        .map_err(|_| bad_param(rule, key, format!("cannot parse `{v}`")))
}

fn mu(rule: &str, v: &str) -> Result<Option<f64>, RuleError> {
    if v.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        num(rule, "mu", v).map(Some)
    }
}

fn parse_phi(rule: &str, v: &str) -> Result<PhiFunction, RuleError> {
    let vals: Vec<f64> = v
        .split(',')
        .map(|x| num(rule, "phi", x.trim()))
        .collect::<Result<_, _>>()?;
    let [p, q, c, lo, hi] = vals[..] else {
        return Err(bad_param(
            rule,
            "phi",
            format!("expected 5 values p,q,c,lo,hi, got {}", vals.len()),
        ));
    };
    PhiFunction::new(p, q, c, lo, hi)
}

impl FromStr for RuleSpec {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, body) = match s.find('[') {
            Some(k) => {
                let body = s[k + 1..].strip_suffix(']').ok_or_else(|| {
                    bad_param(&s[..k], "[", format!("unbalanced brackets in `{s}`"))
                })?;
                (&s[..k], body)
            }
            None => (s, ""),
        };
        let name = name.trim().to_ascii_lowercase().replace('_', "-");
        let params = parse_params(&name, body)?;
        let unknown = |key: &str| Err(bad_param(&name, key, "unknown parameter"));
        let mut spec = match name.as_str() {
            "regret-matching" | "rm" => RuleSpec::RegretMatching { mu: None },
            "modified-rm" | "modified-regret-matching" => RuleSpec::ModifiedRm {
                gamma: ModifiedRegretMatching::DEFAULT_GAMMA,
                delta: ModifiedRegretMatching::DEFAULT_DELTA,
                mu: None,
            },
            "ert" => RuleSpec::Ert {
                frame_len: ExperimentalRegretTesting::DEFAULT_FRAME_LEN,
                threshold: ExperimentalRegretTesting::DEFAULT_THRESHOLD,
                lambda: ExperimentalRegretTesting::DEFAULT_LAMBDA,
            },
            "alert" => RuleSpec::Alert {
                start_regime: Alert::DEFAULT_START,
            },
            "payoff-alert" => RuleSpec::PayoffAlert {
                per_action: PayoffAlert::DEFAULT_PER_ACTION,
                start_regime: PayoffAlert::DEFAULT_START,
            },
            "trial-error" | "trial-and-error" => RuleSpec::TrialError {
                eps: TrialAndError::DEFAULT_EPS,
                phi: TrialAndError::default_phi(),
            },
            "fictitious" | "fictitious-play" => RuleSpec::Fictitious,
            "simple-pure" => RuleSpec::SimplePure,
            "two-recall" => RuleSpec::TwoRecall,
            _ => return Err(RuleError::UnknownRule(name)),
        };
        for (key, v) in &params {
            let k = key.to_ascii_lowercase();
            match (&mut spec, k.as_str()) {
                (RuleSpec::RegretMatching { mu: m }, "mu") => *m = mu(&name, v)?,
                (RuleSpec::ModifiedRm { mu: m, .. }, "mu") => *m = mu(&name, v)?,
                (RuleSpec::ModifiedRm { gamma, .. }, "gamma") => *gamma = num(&name, key, v)?,
                (RuleSpec::ModifiedRm { delta, .. }, "delta") => *delta = num(&name, key, v)?,
                (RuleSpec::Ert { frame_len, .. }, "t") => *frame_len = num(&name, key, v)?,
                (RuleSpec::Ert { threshold, .. }, "rho") => *threshold = num(&name, key, v)?,
                (RuleSpec::Ert { lambda, .. }, "lambda") => *lambda = num(&name, key, v)?,
                (
                    RuleSpec::Alert { start_regime } | RuleSpec::PayoffAlert { start_regime, .. },
                    "l0",
                ) => *start_regime = num(&name, key, v)?,
                (RuleSpec::PayoffAlert { per_action, .. }, "g") => {
                    *per_action = num(&name, key, v)?
                }
                (RuleSpec::TrialError { eps, .. }, "eps") => *eps = num(&name, key, v)?,
                (RuleSpec::TrialError { phi, .. }, "phi") => *phi = parse_phi(&name, v)?,
                _ => return unknown(key),
            }
        }
        Ok(spec)
    }
}

/// Parses a `--rules` list; a single spec applies to all `n` players.
pub fn parse_rule_list(list: &str, n: usize) -> Result<Vec<RuleSpec>, RuleError> {
    let specs = split_rule_list(list)
        .into_iter()
        .map(str::parse)
        .collect::<Result<Vec<RuleSpec>, _>>()?;
    match specs.len() {
        1 => Ok(vec![specs[0].clone(); n]),
        k if k == n => Ok(specs),
        k => Err(RuleError::BadParameter {
            rule: list.to_string(),
            key: "rules".into(),
            reason: format!("{k} specs given for {n} players"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            "regret-matching[mu=auto]".parse::<RuleSpec>().unwrap(),
            RuleSpec::RegretMatching { mu: None }
        );
        assert_eq!(
            "trial-error[eps=0.01,phi=0.6,0.1,0.05,0.01,0.99]"
                .parse::<RuleSpec>()
                .unwrap(),
            RuleSpec::TrialError {
                eps: 0.01,
                phi: PhiFunction::new(0.6, 0.1, 0.05, 0.01, 0.99).unwrap()
            }
        );
        assert_eq!(
            "alert".parse::<RuleSpec>().unwrap(),
            RuleSpec::Alert { start_regime: 1 }
        );
        assert_eq!(
            "ert[T=10000,rho=0.12,lambda=0.001]"
                .parse::<RuleSpec>()
                .unwrap(),
            RuleSpec::Ert {
                frame_len: 10_000,
                threshold: 0.12,
                lambda: 0.001
            }
        );
        assert_eq!(
            "fictitious".parse::<RuleSpec>().unwrap(),
            RuleSpec::Fictitious
        );
        assert_eq!(
            "simple-pure".parse::<RuleSpec>().unwrap(),
            RuleSpec::SimplePure
        );
        assert_eq!(
            "two-recall".parse::<RuleSpec>().unwrap(),
            RuleSpec::TwoRecall
        );
        assert_eq!(
            "modified-rm[gamma=0.2,delta=0.5]"
                .parse::<RuleSpec>()
                .unwrap(),
            RuleSpec::ModifiedRm {
                gamma: 0.2,
                delta: 0.5,
                mu: None
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "regret-matching[mu=7]",
            "modified-rm[gamma=0.1,delta=0.3,mu=auto]",
            "ert[T=50,rho=0.2,lambda=0]",
            "alert[l0=2]",
            "payoff-alert[g=10,l0=3]",
            "trial-error[eps=0.05,phi=0.2,0.4,0.15,0.01,0.99]",
            "fictitious",
        ] {
            let spec: RuleSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn errors_name_the_token() {
        match "regret-mtching".parse::<RuleSpec>() {
            Err(RuleError::UnknownRule(name)) => assert_eq!(name, "regret-mtching"),
            other => panic!("{other:?}"),
        }
        let err = "ert[T=abc]".parse::<RuleSpec>().unwrap_err().to_string();
        assert!(err.contains("abc"), "{err}");
        assert!("ert[foo=1]"
            .parse::<RuleSpec>()
            .unwrap_err()
            .to_string()
            .contains("foo"));
        assert!("trial-error[phi=1,2]".parse::<RuleSpec>().is_err());
    }

    #[test]
    fn list_splitting() {
        let parts = split_rule_list("trial-error[eps=0.01,phi=0.6,0.1,0.05,0.01,0.99], two-recall");
        assert_eq!(
            parts,
            vec![
                "trial-error[eps=0.01,phi=0.6,0.1,0.05,0.01,0.99]",
                "two-recall"
            ]
        );
        assert_eq!(parse_rule_list("fictitious", 3).unwrap().len(), 3);
        assert!(parse_rule_list("fictitious,fictitious", 3).is_err());
    }
}
