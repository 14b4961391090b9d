//! Plain-text scenario configuration.
//!
//! One `key = value` pair per line; `#` starts a comment. Lists are comma
//! separated. Numbers accept `pi`, `pi/k` and `x*pi`. Relative paths are
//! resolved against the directory of the config file.
//!
//! ```text
//! seed = 7
//! geometry = sphere
//! action = rotation 0.7, rotation pi/2, identity
//! t_grid = 0.05, 0.5, 2
//! curvature = sphere4.txt
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use heatkernel::equivariant::Scenario;
use heatkernel::spectral::{Geometry, IsometryAction};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("scenario {path}: {source}")]
    Scenario { path: PathBuf, source: heatkernel::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Algebra,
    FixedPoint,
    Getzler,
    Duhamel,
    Spectral,
    Torsion,
    All,
}

impl Suite {
    pub const MEMBERS: [Suite; 6] =
        [Suite::Algebra, Suite::FixedPoint, Suite::Getzler, Suite::Duhamel, Suite::Spectral, Suite::Torsion];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::FixedPoint => "fixed-point",
            Suite::Getzler => "getzler",
            Suite::Duhamel => "duhamel",
            Suite::Spectral => "spectral",
            Suite::Torsion => "torsion",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::MEMBERS
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|m| m.name() == s)
            .copied()
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub spectral: f64,
    pub tail: f64,
    pub constancy: f64,
    pub fiber: f64,
    pub slope: f64,
    pub duhamel: f64,
    pub torsion: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            spectral: 1e-8,
            tail: 1e-12,
            constancy: 1e-9,
            fiber: 1e-6,
            slope: 0.1,
            duhamel: 1e-5,
            torsion: 1e-12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub suite: Option<Suite>,
    pub seed: u64,
    pub samples: usize,
    pub dims: Vec<usize>,
    pub geometry: Option<Geometry>,
    pub actions: Vec<IsometryAction>,
    pub t_grid: Vec<f64>,
    pub cutoff: Option<usize>,
    pub variation: f64,
    pub tolerances: Tolerances,
    pub curvature: Option<(PathBuf, Scenario)>,
    pub trace_csv: Option<PathBuf>,
    /// Normalized `key = value` lines, the input to every record digest.
    canonical: String,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            suite: None,
            seed: 0,
            samples: 4,
            dims: vec![2, 4],
            geometry: None,
            actions: Vec::new(),
            t_grid: vec![0.05, 0.1, 0.25, 0.5, 1.0, 2.0],
            cutoff: None,
            variation: 2.0,
            tolerances: Tolerances::default(),
            curvature: None,
            trace_csv: None,
            canonical: String::new(),
        }
    }
}

/// `1.5`, `pi`, `pi/2`, `3*pi`.
pub fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("pi") {
        let rest = rest.trim();
        if rest.is_empty() {
            return Some(PI);
        }
        let k: f64 = rest.strip_prefix('/')?.trim().parse().ok()?;
        return Some(PI / k);
    }
    if let Some(head) = t.strip_suffix("pi") {
        let x: f64 = head.trim().strip_suffix('*')?.trim().parse().ok()?;
        return Some(x * PI);
    }
    t.parse().ok()
}

fn parse_action(text: &str) -> Option<IsometryAction> {
    let mut words = text.split_whitespace();
    let kind = words.next()?;
    let args: Vec<f64> = words.map(parse_number).collect::<Option<_>>()?;
    match (kind, args.as_slice()) {
        ("identity", []) => Some(IsometryAction::Identity),
        ("negation", []) => Some(IsometryAction::Negation),
        ("rotation", [theta]) => Some(IsometryAction::Rotation(*theta)),
        ("translation", [v1, v2]) => Some(IsometryAction::Translation([*v1, *v2])),
        _ => None,
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: idx + 1,
                message: "expected `key = value`".into(),
            })?;
            let key = key.trim().to_string();
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(ConfigError::Syntax { line: idx + 1, message: format!("duplicate key `{key}`") });
            }
        }

        let mut cfg = ScenarioConfig::default();
        for (key, value) in &entries {
            let bad = |message: &str| ConfigError::Value { key: key.clone(), message: message.to_string() };
            let positive = |v: &str| -> Result<f64, ConfigError> {
                match parse_number(v) {
                    Some(x) if x > 0.0 && x.is_finite() => Ok(x),
                    _ => Err(bad("expected a positive number")),
                }
            };
            match key.as_str() {
                "suite" => cfg.suite = Some(value.parse()?),
                "seed" => cfg.seed = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
                "samples" => {
                    cfg.samples = value.parse().map_err(|_| bad("expected an unsigned integer"))?;
                    if cfg.samples == 0 {
                        return Err(bad("must be at least 1"));
                    }
                }
                "dims" => {
                    cfg.dims = split_list(value)
                        .map(|s| s.parse::<usize>().ok().filter(|n| *n > 0 && n % 2 == 0 && *n <= 8))
                        .collect::<Option<_>>()
                        .ok_or_else(|| bad("expected even dimensions between 2 and 8"))?;
                }
                "geometry" => {
                    cfg.geometry = Some(match value.as_str() {
                        "sphere" => Geometry::Sphere,
                        "torus" => Geometry::Torus,
                        _ => return Err(bad("expected `sphere` or `torus`")),
                    })
                }
                "action" => {
                    cfg.actions = split_list(value)
                        .map(parse_action)
                        .collect::<Option<_>>()
                        .ok_or_else(|| bad("expected identity | negation | rotation θ | translation v1 v2"))?;
                }
                "t_grid" => {
                    cfg.t_grid = split_list(value).map(positive).collect::<Result<_, _>>()?;
                }
                "cutoff" => {
                    cfg.cutoff = match value.as_str() {
                        "auto" => None,
                        v => Some(v.parse().ok().filter(|c| *c > 0).ok_or_else(|| bad("expected `auto` or a positive integer"))?),
                    }
                }
                "variation" => cfg.variation = parse_number(value).ok_or_else(|| bad("expected a number"))?,
                "tol.spectral" => cfg.tolerances.spectral = positive(value)?,
                "tol.tail" => cfg.tolerances.tail = positive(value)?,
                "tol.constancy" => cfg.tolerances.constancy = positive(value)?,
                "tol.fiber" => cfg.tolerances.fiber = positive(value)?,
                "tol.slope" => cfg.tolerances.slope = positive(value)?,
                "tol.duhamel" => cfg.tolerances.duhamel = positive(value)?,
                "tol.torsion" => cfg.tolerances.torsion = positive(value)?,
                "curvature" => {
                    let path = base.join(value);
                    let text = std::fs::read_to_string(&path)
                        .map_err(|source| ConfigError::Io { path: path.clone(), source })?;
                    let scenario = Scenario::parse(&text)
                        .map_err(|source| ConfigError::Scenario { path: path.clone(), source })?;
                    scenario
                        .curvature::<heatkernel::Rational>()
                        .and_then(|_| scenario.isometry())
                        .map_err(|source| ConfigError::Scenario { path: path.clone(), source })?;
                    cfg.curvature = Some((path, scenario));
                }
                "trace_csv" => cfg.trace_csv = Some(base.join(value)),
                _ => return Err(ConfigError::UnknownKey(key.clone())),
            }
        }
        if cfg.t_grid.is_empty() {
            return Err(ConfigError::Value { key: "t_grid".into(), message: "must not be empty".into() });
        }
        if !cfg.actions.is_empty() && cfg.geometry.is_none() {
            return Err(ConfigError::Value { key: "action".into(), message: "requires `geometry`".into() });
        }
        cfg.canonical = entries
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "suite" | "trace_csv"))
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect();
        if let Some((_, scenario)) = &cfg.curvature {
            cfg.canonical.push_str(&format!("scenario={scenario:?}\n"));
        }
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn canonical(&self) -> String {
        format!("{}seed={}\n", self.canonical, self.seed)
    }
}
