//! Run configuration: flags, a flat `key = value` file and the
//! `NOETHERLAB_SEED` environment variable, in decreasing precedence.
//!
//! File format, one setting per line, `#` starts a comment:
//!
//! ```text
//! gamma = 5/3          # or "symbolic"
//! entropy = general    # or "isentropic"
//! suites = noether, claws
//! tol = 1e-9
//! trials = 100
//! seed = 42
//! format = json-lines  # or "text"
//! ```

use std::fmt;

use noetherlab_core::coeff::rat;
use noetherlab_core::expr::parse_coeff;
use noetherlab_core::jet::Entropy;
use noetherlab_core::model::{GammaMode, ModelConfig};

use crate::oracle::{OracleOptions, DEFAULT_SEED, DEFAULT_TOL, DEFAULT_TRIALS};
use crate::report::Format;

pub const SEED_ENV: &str = "NOETHERLAB_SEED";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown setting `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Admitted,
    Noether,
    Claws,
    Eulerian,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Admitted, Suite::Noether, Suite::Claws, Suite::Eulerian, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Admitted => "admitted",
            Suite::Noether => "noether",
            Suite::Claws => "claws",
            Suite::Eulerian => "eulerian",
            Suite::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn bad(key: &str, value: &str, reason: impl ToString) -> ConfigError {
    ConfigError::BadValue { key: key.into(), value: value.into(), reason: reason.to_string() }
}

pub fn parse_gamma(s: &str) -> Result<GammaMode, ConfigError> {
    let s = s.trim();
    if s == "symbolic" {
        return Ok(GammaMode::Symbolic);
    }
    let c = parse_coeff(s).map_err(|e| bad("gamma", s, e))?;
    let g = c.as_rational().ok_or_else(|| bad("gamma", s, "not a rational number"))?;
    if g <= rat(1, 1) {
        return Err(bad("gamma", s, "gamma must exceed 1"));
    }
    Ok(GammaMode::Rational(g))
}

pub fn parse_entropy(s: &str) -> Result<Entropy, ConfigError> {
    match s.trim() {
        "isentropic" => Ok(Entropy::Isentropic),
        "general" => Ok(Entropy::General),
        other => Err(bad("entropy", other, "expected isentropic or general")),
    }
}

pub fn parse_suites(s: &str) -> Result<Vec<Suite>, ConfigError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
            continue;
        }
        out.push(Suite::parse(part).ok_or_else(|| bad("suites", part, "unknown suite"))?);
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(bad("suites", s, "no suite selected"));
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    s.trim().parse().map_err(|e| bad(key, s, e))
}

/// Settings that may be left open; layers are merged with [`Partial::or`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Partial {
    pub gamma: Option<GammaMode>,
    pub entropy: Option<Entropy>,
    pub suites: Option<Vec<Suite>>,
    pub tol: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl Partial {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key.trim() {
            "gamma" => self.gamma = Some(parse_gamma(v)?),
            "entropy" => self.entropy = Some(parse_entropy(v)?),
            "suite" | "suites" => self.suites = Some(parse_suites(v)?),
            "tol" => {
                let t: f64 = parse_num("tol", v)?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(bad("tol", v, "must be positive"));
                }
                self.tol = Some(t);
            }
            "trials" => {
                let n: usize = parse_num("trials", v)?;
                if n == 0 {
                    return Err(bad("trials", v, "must be at least 1"));
                }
                self.trials = Some(n);
            }
            "seed" => self.seed = Some(parse_num("seed", v)?),
            "format" => self.format = Some(Format::parse(v).ok_or_else(|| bad("format", v, "expected text or json-lines"))?),
            other => return Err(ConfigError::UnknownKey(other.into())),
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Partial, ConfigError> {
        let mut p = Partial::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            p.set(k, v)?;
        }
        Ok(p)
    }

    pub fn from_file(path: &str) -> Result<Partial, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.into(), msg: e.to_string() })?;
        Partial::from_text(&text)
    }

    /// The seed from `NOETHERLAB_SEED`, if set.
    pub fn from_env() -> Result<Partial, ConfigError> {
        let mut p = Partial::default();
        if let Ok(v) = std::env::var(SEED_ENV) {
            p.seed = Some(parse_num(SEED_ENV, &v)?);
        }
        Ok(p)
    }

    /// `self` where set, `other` otherwise.
    pub fn or(self, other: Partial) -> Partial {
        Partial {
            gamma: self.gamma.or(other.gamma),
            entropy: self.entropy.or(other.entropy),
            suites: self.suites.or(other.suites),
            tol: self.tol.or(other.tol),
            trials: self.trials.or(other.trials),
            seed: self.seed.or(other.seed),
            format: self.format.or(other.format),
        }
    }

    pub fn resolve(self) -> RunConfig {
        RunConfig {
            gamma: self.gamma,
            entropy: self.entropy,
            suites: self.suites.unwrap_or_else(|| Suite::ALL.to_vec()),
            tol: self.tol.unwrap_or(DEFAULT_TOL),
            trials: self.trials.unwrap_or(DEFAULT_TRIALS),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            format: self.format.unwrap_or_default(),
        }
    }
}

/// A resolved run. Open `gamma` means symbolic and `gamma = 2`; open
/// `entropy` means both modes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gamma: Option<GammaMode>,
    pub entropy: Option<Entropy>,
    pub suites: Vec<Suite>,
    pub tol: f64,
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Partial::default().resolve()
    }
}

impl RunConfig {
    pub fn model_configs(&self) -> Vec<ModelConfig> {
        let gammas = match &self.gamma {
            Some(g) => vec![g.clone()],
            None => vec![GammaMode::Symbolic, GammaMode::Rational(rat(2, 1))],
        };
        let entropies = match self.entropy {
            Some(e) => vec![e],
            None => vec![Entropy::Isentropic, Entropy::General],
        };
        let mut out = Vec::new();
        for g in &gammas {
            for e in &entropies {
                out.push(ModelConfig::new(g.clone(), *e).expect("gamma validated"));
            }
        }
        out
    }

    pub fn oracle(&self) -> OracleOptions {
        OracleOptions { trials: self.trials, tol: self.tol, seed: self.seed }
    }

    pub fn has(&self, s: Suite) -> bool {
        self.suites.contains(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_settings_parse() {
        let p = Partial::from_text("# run\ngamma = 5/3\nentropy=general # noniso\nsuites = claws, noether\nseed = 9\nformat = json-lines\n").unwrap();
        assert_eq!(p.gamma, Some(GammaMode::Rational(rat(5, 3))));
        assert_eq!(p.entropy, Some(Entropy::General));
        assert_eq!(p.suites, Some(vec![Suite::Noether, Suite::Claws]));
        assert_eq!(p.seed, Some(9));
        assert_eq!(p.format, Some(Format::JsonLines));
    }

    #[test]
    fn flags_override_file() {
        let file = Partial::from_text("seed = 1\ntol = 1e-6").unwrap();
        let mut flags = Partial::default();
        flags.set("seed", "2").unwrap();
        let run = flags.or(file).resolve();
        assert_eq!(run.seed, 2);
        assert_eq!(run.tol, 1e-6);
    }

    #[test]
    fn malformed_settings_are_errors() {
        assert!(matches!(Partial::from_text("gamma"), Err(ConfigError::Syntax { line: 1 })));
        assert!(matches!(Partial::from_text("colour = red"), Err(ConfigError::UnknownKey(_))));
        assert!(Partial::from_text("gamma = 1/2").is_err());
        assert!(Partial::from_text("gamma = x").is_err());
        assert!(Partial::from_text("suites = everything").is_err());
        assert!(Partial::from_text("trials = 0").is_err());
    }

    #[test]
    fn default_run_covers_both_modes_and_gamma_two() {
        let configs = RunConfig::default().model_configs();
        assert_eq!(configs.len(), 4);
        assert_eq!(configs.iter().filter(|c| c.is_gamma_two()).count(), 2);
    }
}
