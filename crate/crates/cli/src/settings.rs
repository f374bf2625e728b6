//! Parameter resolution: explicit flag, then `--config` file, then default.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::failure::Failure;

pub const DEFAULT_M: u32 = 6;
pub const DEFAULT_BETA: f64 = 1.0;
pub const DEFAULT_N0: u64 = 4;
pub const DEFAULT_STEPS: u32 = 10;
pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_PSI: &str = "bump:c=0,w=1,p=1";

/// `key=value` pairs read from a config file.
#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::Usage(format!(
                    "config line {}: expected key=value, got `{raw}`",
                    i + 1
                ))
            })?;
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            if entries
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(Failure::Usage(format!(
                    "config line {}: duplicate key `{key}`",
                    i + 1
                )));
            }
        }
        Ok(Self { entries })
    }
}

/// Resolves one command's parameters and records them for the config echo.
pub struct Resolver {
    config: ConfigFile,
    used: Vec<String>,
    echo: Map<String, Value>,
}

impl Resolver {
    pub fn new(command: &str, config: ConfigFile) -> Self {
        let mut echo = Map::new();
        echo.insert("command".into(), Value::from(command));
        Self {
            config,
            used: Vec::new(),
            echo,
        }
    }

    fn lookup<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, Failure>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.used.push(key.to_string());
        if flag.is_some() {
            return Ok(flag);
        }
        match self.config.entries.get(key) {
            Some(raw) => raw.parse().map(Some).map_err(|e| {
                Failure::Usage(format!("config key `{key}`: cannot parse `{raw}`: {e}"))
            }),
            None => Ok(None),
        }
    }

    /// A value that falls back to `default`.
    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, Failure>
    where
        T: FromStr + Into<Value> + Clone,
        T::Err: Display,
    {
        let v = self.lookup(key, flag)?.unwrap_or(default);
        self.echo.insert(key.into(), v.clone().into());
        Ok(v)
    }

    /// A value with no default.
    pub fn require<T>(&mut self, key: &str, flag: Option<T>) -> Result<T, Failure>
    where
        T: FromStr + Into<Value> + Clone,
        T::Err: Display,
    {
        let v = self
            .lookup(key, flag)?
            .ok_or_else(|| Failure::Usage(format!("missing required parameter --{key}")))?;
        self.echo.insert(key.into(), v.clone().into());
        Ok(v)
    }

    /// A value that may stay unset.
    pub fn optional<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, Failure>
    where
        T: FromStr + Into<Value> + Clone,
        T::Err: Display,
    {
        let v = self.lookup(key, flag)?;
        self.echo
            .insert(key.into(), v.clone().map_or(Value::Null, Into::into));
        Ok(v)
    }

    /// A boolean switch; config files accept `true`/`false`.
    pub fn switch(&mut self, key: &str, flag: bool) -> Result<bool, Failure> {
        let v = self.lookup(key, flag.then_some(true))?.unwrap_or(false);
        self.echo.insert(key.into(), Value::from(v));
        Ok(v)
    }

    /// Rejects config keys the command does not understand and returns the echo.
    pub fn finish(self, output: &str) -> Result<Value, Failure> {
        if let Some(key) = self.config.entries.keys().find(|k| !self.used.contains(k)) {
            let cmd = self.echo["command"]
                .as_str()
                .unwrap_or_default()
                .to_string();
            return Err(Failure::Usage(format!(
                "config key `{key}` is not a parameter of `{cmd}`"
            )));
        }
        let mut echo = self.echo;
        echo.insert("output".into(), Value::from(output));
        Ok(Value::Object(echo))
    }
}

/// An inclusive `a:b:step` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

pub const MAX_GRID_POINTS: usize = 1_000_000;

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, step] = parts.as_slice() else {
            return Err(format!("grid must look like a:b:step, got `{s}`"));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad grid number `{v}`: {e}"))
        };
        let grid = Grid {
            start: num(a)?,
            stop: num(b)?,
            step: num(step)?,
        };
        if !(grid.start.is_finite() && grid.stop.is_finite() && grid.step.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if grid.step <= 0.0 || grid.stop < grid.start {
            return Err(format!("grid needs a <= b and step > 0, got `{s}`"));
        }
        if (grid.stop - grid.start) / grid.step >= MAX_GRID_POINTS as f64 {
            return Err(format!("grid has more than {MAX_GRID_POINTS} points"));
        }
        Ok(grid)
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

impl From<Grid> for Value {
    fn from(g: Grid) -> Self {
        Value::from(g.to_string())
    }
}

/// A comma-separated list of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad number `{v}`: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err("empty list".into());
        }
        Ok(Self(values))
    }
}

impl From<RealList> for Value {
    fn from(l: RealList) -> Self {
        Value::from(l.0)
    }
}
