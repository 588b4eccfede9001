//! Run configuration: a flat `key = value` file overlaid by command-line flags.
//!
//! Every setting is collected as a string under a canonical key (dashes
//! replaced by underscores) and parsed exactly once, so a value coming from a
//! file and the same value passed as a flag produce identical diagnostics.

use super::CliError;
use crate::nu_engine::Sign;
use crate::oracle::{RadialGrid, GRID_POINTS_ENV};
use crate::polynomial::Polynomial;
use crate::radial_model::{kappas_up_to, PotentialParams, QuantumNumbers};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Keys accepted in a config file.
pub const KNOWN_KEYS: &[&str] = &[
    "a",
    "b",
    "c",
    "m",
    "delta",
    "n_max",
    "l_max",
    "kappa",
    "branch",
    "tol",
    "oracle_tol",
    "grid_points",
    "oracle_r_min",
    "oracle_r_max",
    "format",
    "out",
    "n",
    "r_min",
    "r_max",
    "samples",
    "sidecar",
    "sigma",
    "tau_tilde",
    "sigma_tilde",
];

/// Raw settings keyed by canonical name; later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

pub fn canonical_key(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_")
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{origin}:{}: expected `key = value`, got {line:?}", idx + 1))
            })?;
            let key = canonical_key(key);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("{origin}:{}: unknown key {key:?}", idx + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(canonical_key(key), value.into());
    }

    /// Copies every key of `other` over `self`.
    pub fn overlay(&mut self, other: Settings) {
        self.values.extend(other.values);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("invalid value for {key}: {v:?} is not {what}")))
            })
            .transpose()
    }

    fn real(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let x = self.parsed::<f64>(key, "a number")?.unwrap_or(default);
        if x.is_finite() {
            Ok(x)
        } else {
            Err(CliError::Config(format!("invalid value for {key}: must be finite")))
        }
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let x = self.real(key, default)?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(CliError::Config(format!("invalid value for {key}: must be positive, got {x}")))
        }
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self.parsed::<usize>(key, "a non-negative integer")?.unwrap_or(default))
    }

    fn list<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<Vec<T>>, CliError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim().parse::<T>().map_err(|_| {
                            CliError::Config(format!("invalid value for {key}: {item:?} is not {what}"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMode {
    Fixed(f64),
    /// Chosen per state by minimal sensitivity.
    Auto,
}

/// Settings shared by the physics subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PotentialParams,
    pub mass: f64,
    pub delta: DeltaMode,
    pub n_max: usize,
    pub l_max: u32,
    /// Explicit κ list; overrides `l_max` when present.
    pub kappas: Option<Vec<i32>>,
    pub branch: Sign,
    pub tol: f64,
    pub oracle_tol: f64,
    pub grid: RadialGrid,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub const DEFAULT_TOL: f64 = 1e-10;
    pub const DEFAULT_ORACLE_TOL: f64 = 1e-8;

    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let params = PotentialParams::new(s.real("a", 0.0)?, s.real("b", 0.0)?, s.real("c", 0.0)?)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let delta = match s.get("delta") {
            None | Some("auto") => DeltaMode::Auto,
            Some(_) => DeltaMode::Fixed(s.positive("delta", 1.0)?),
        };
        let kappas = s.list::<i32>("kappa", "an integer")?;
        if let Some(list) = &kappas {
            if list.contains(&0) {
                return Err(CliError::Config("invalid value for kappa: must be nonzero".into()));
            }
        }
        let points = match s.get("grid_points") {
            Some(_) => s.count("grid_points", 0)?,
            None => match std::env::var(GRID_POINTS_ENV) {
                Ok(v) => v.trim().parse::<usize>().map_err(|_| {
                    CliError::Config(format!("invalid value for {GRID_POINTS_ENV}: {v:?} is not an integer"))
                })?,
                Err(_) => RadialGrid::DEFAULT_POINTS,
            },
        };
        let grid = RadialGrid::new(
            s.positive("oracle_r_min", RadialGrid::DEFAULT_R_MIN)?,
            s.positive("oracle_r_max", RadialGrid::DEFAULT_R_MAX)?,
            points,
        )
        .map_err(|e| CliError::Config(format!("invalid oracle grid: {e}")))?;
        Ok(Self {
            params,
            mass: s.positive("m", 1.0)?,
            delta,
            n_max: s.count("n_max", 0)?,
            l_max: s.parsed::<u32>("l_max", "a non-negative integer")?.unwrap_or(0),
            kappas,
            branch: parse_branch(s)?,
            tol: s.positive("tol", Self::DEFAULT_TOL)?,
            oracle_tol: s.positive("oracle_tol", Self::DEFAULT_ORACLE_TOL)?,
            grid,
            format: parse_format(s)?,
            out: s.get("out").map(PathBuf::from),
        })
    }

    /// Every requested state, `n` ascending then `κ` ascending.
    pub fn states(&self) -> Vec<QuantumNumbers> {
        let mut kappas = self.kappas.clone().unwrap_or_else(|| kappas_up_to(self.l_max));
        kappas.sort_unstable();
        kappas.dedup();
        (0..=self.n_max)
            .flat_map(|n| kappas.iter().map(move |&kappa| QuantumNumbers { n, kappa }))
            .collect()
    }
}

/// Extra settings of the `wavefunction` subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionConfig {
    pub state: QuantumNumbers,
    pub r_min: f64,
    pub r_max: f64,
    pub samples: usize,
    pub sidecar: Option<PathBuf>,
}

impl WavefunctionConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let kappa = match s.list::<i32>("kappa", "an integer")?.as_deref() {
            None => -1,
            Some([k]) => *k,
            Some(_) => {
                return Err(CliError::Config("invalid value for kappa: wavefunction takes a single κ".into()))
            }
        };
        let state = QuantumNumbers::new(s.count("n", 0)?, kappa)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let r_min = s.real("r_min", 0.0)?;
        let r_max = s.real("r_max", 20.0)?;
        if r_min < 0.0 || r_max < r_min {
            return Err(CliError::Config(format!(
                "invalid value for r_min/r_max: need 0 <= r_min <= r_max, got [{r_min}, {r_max}]"
            )));
        }
        let samples = s.count("samples", 201)?;
        if samples == 0 {
            return Err(CliError::Config("invalid value for samples: must be at least 1".into()));
        }
        Ok(Self { state, r_min, r_max, samples, sidecar: s.get("sidecar").map(PathBuf::from) })
    }

    /// `samples` evenly spaced radii from `r_min` to `r_max` inclusive.
    pub fn radii(&self) -> Vec<f64> {
        if self.samples == 1 {
            return vec![self.r_min];
        }
        let step = (self.r_max - self.r_min) / (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| if i + 1 == self.samples { self.r_max } else { self.r_min + step * i as f64 })
            .collect()
    }
}

/// Inputs of the `nu-solve` subcommand; coefficients are constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct NuSolveConfig {
    pub sigma: Polynomial,
    pub tau_tilde: Polynomial,
    pub sigma_tilde: Polynomial,
    pub n: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl NuSolveConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let poly = |key: &str| -> Result<Polynomial, CliError> {
            let coeffs = s
                .list::<f64>(key, "a number")?
                .ok_or_else(|| CliError::Config(format!("missing value for {key}")))?;
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(CliError::Config(format!("invalid value for {key}: must be finite")));
            }
            Ok(Polynomial::new(coeffs))
        };
        let format = parse_format(s)?;
        if format == Format::Csv && s.get("format").is_some() {
            return Err(CliError::Config("invalid value for format: nu-solve emits json only".into()));
        }
        Ok(Self {
            sigma: poly("sigma")?,
            tau_tilde: poly("tau_tilde")?,
            sigma_tilde: poly("sigma_tilde")?,
            n: s.count("n", 0)?,
            format: Format::Json,
            out: s.get("out").map(PathBuf::from),
        })
    }
}

fn parse_branch(s: &Settings) -> Result<Sign, CliError> {
    match s.get("branch") {
        None => Ok(Sign::Plus),
        Some(v) => v
            .parse::<Sign>()
            .map_err(|_| CliError::Config(format!("invalid value for branch: {v:?} (expected plus or minus)"))),
    }
}

fn parse_format(s: &Settings) -> Result<Format, CliError> {
    match s.get("format") {
        None | Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(v) => Err(CliError::Config(format!("invalid value for format: {v:?} (expected csv or json)"))),
    }
}
