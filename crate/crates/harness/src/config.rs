//! Run configuration: a flat `key = value` file merged with command-line
//! flags, flags taking precedence.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Spaces,
    Boundary,
    Metrics,
    Flow,
    Circumcenter,
    Extension,
    Holder,
    Qi,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Spaces,
        Suite::Boundary,
        Suite::Metrics,
        Suite::Flow,
        Suite::Circumcenter,
        Suite::Extension,
        Suite::Holder,
        Suite::Qi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spaces => "spaces",
            Suite::Boundary => "boundary",
            Suite::Metrics => "metrics",
            Suite::Flow => "flow",
            Suite::Circumcenter => "circumcenter",
            Suite::Extension => "extension",
            Suite::Holder => "holder",
            Suite::Qi => "qi",
        }
    }
}

/// What `--suite` selects: one suite or all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub enum Selection {
    All,
    One(Suite),
}

impl Selection {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            Selection::All => Suite::ALL.to_vec(),
            Selection::One(s) => vec![s],
        }
    }
}

impl From<Selection> for String {
    fn from(s: Selection) -> String {
        s.to_string()
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::All => f.write_str("all"),
            Selection::One(s) => f.write_str(s.name()),
        }
    }
}

impl FromStr for Selection {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .map(|&x| Selection::One(x))
            .ok_or_else(|| ConfigError::Value { key: "suite".into(), value: s.into() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(ConfigError::Value { key: "format".into(), value: s.into() }),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum ConfigError {
    Io { path: PathBuf, message: String },
    Syntax { line: usize, text: String },
    UnknownKey { line: usize, key: String },
    Value { key: String, value: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, message } => write!(f, "cannot read {}: {message}", path.display()),
            ConfigError::Syntax { line, text } => write!(f, "line {line}: expected `key = value`, found `{text}`"),
            ConfigError::UnknownKey { line, key } => write!(f, "line {line}: unknown key `{key}`"),
            ConfigError::Value { key, value } => write!(f, "invalid value `{value}` for `{key}`"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A fully resolved run configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub suite: Selection,
    pub seed: u64,
    /// Directions in each conjugated fan.
    pub fan: usize,
    /// Boundary sample grid size.
    pub grid: usize,
    /// Sampled pairs in the Hölder and quasi-isometry suites.
    pub pairs: usize,
    #[serde(skip)]
    pub out: PathBuf,
    pub format: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            suite: Selection::All,
            seed: 7,
            fan: 128,
            grid: 256,
            pairs: 500,
            out: PathBuf::from("verify-out"),
            format: Format::Json,
        }
    }
}

/// Values that may come from the config file or from flags. `None` means
/// "not given here".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub suite: Option<Selection>,
    pub seed: Option<u64>,
    pub fan: Option<usize>,
    pub grid: Option<usize>,
    pub pairs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Overrides {
    /// Entries of `other` replace those of `self`.
    pub fn merged(self, other: Overrides) -> Overrides {
        Overrides {
            suite: other.suite.or(self.suite),
            seed: other.seed.or(self.seed),
            fan: other.fan.or(self.fan),
            grid: other.grid.or(self.grid),
            pairs: other.pairs.or(self.pairs),
            out: other.out.or(self.out),
            format: other.format.or(self.format),
        }
    }

    pub fn resolve(self) -> Result<Config, ConfigError> {
        let d = Config::default();
        let cfg = Config {
            suite: self.suite.unwrap_or(d.suite),
            seed: self.seed.unwrap_or(d.seed),
            fan: self.fan.unwrap_or(d.fan),
            grid: self.grid.unwrap_or(d.grid),
            pairs: self.pairs.unwrap_or(d.pairs),
            out: self.out.unwrap_or(d.out),
            format: self.format.unwrap_or(d.format),
        };
        if cfg.fan < 16 {
            return Err(ConfigError::Value { key: "fan".into(), value: cfg.fan.to_string() });
        }
        if cfg.grid < 16 {
            return Err(ConfigError::Value { key: "grid".into(), value: cfg.grid.to_string() });
        }
        if cfg.pairs == 0 {
            return Err(ConfigError::Value { key: "pairs".into(), value: "0".into() });
        }
        Ok(cfg)
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Value { key: key.into(), value: value.into() })
}

/// Parses a flat config file. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_config(text: &str) -> Result<Overrides, ConfigError> {
    let mut o = Overrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { line: i + 1, text: line.into() });
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "suite" => o.suite = Some(value.parse()?),
            "seed" => o.seed = Some(parse_value(key, value)?),
            "fan" => o.fan = Some(parse_value(key, value)?),
            "grid" => o.grid = Some(parse_value(key, value)?),
            "pairs" => o.pairs = Some(parse_value(key, value)?),
            "out" => o.out = Some(PathBuf::from(value)),
            "format" => o.format = Some(value.parse()?),
            _ => return Err(ConfigError::UnknownKey { line: i + 1, key: key.into() }),
        }
    }
    Ok(o)
}

pub fn read_config(path: &Path) -> Result<Overrides, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    parse_config(&text)
}
