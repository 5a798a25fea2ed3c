//! Experiment configuration: a flat `key = value` file, one key per line,
//! `#` starts a comment. Command-line flags override file values.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use equifac::{MechanismSpec, NumericPolicy, Objective};

use crate::error::CliError;
use crate::parse::{parse_list, parse_number};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 10_000;
pub const SEED_ENV: &str = "EQUIFAC_SEED";

/// Every key a config file may set.
pub const KEYS: &[&str] = &[
    "mechanism",
    "gamma",
    "phantoms",
    "objective",
    "facilities",
    "profile",
    "n_min",
    "n_max",
    "trials",
    "seed",
    "grid_resolution",
    "abs_tol",
    "refine_rounds",
    "restarts",
    "prune",
    "out",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub mechanism: Option<String>,
    pub gamma: Option<f64>,
    pub phantoms: Option<Vec<f64>>,
    pub objective: Option<String>,
    pub facilities: Option<usize>,
    pub profile: Option<Vec<f64>>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    /// Random samples for searches, random trials for strategy-proofness.
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub grid_resolution: Option<usize>,
    pub abs_tol: Option<f64>,
    pub refine_rounds: Option<usize>,
    pub restarts: Option<usize>,
    pub prune: Option<bool>,
    pub out: Option<PathBuf>,
}

fn parse_int<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Usage(format!("{key}: expected a non-negative integer, got {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!("{key}: expected true or false, got {v:?}"))),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            c.set(key.trim(), value.trim())
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "mechanism" => self.mechanism = Some(v.to_string()),
            "gamma" => self.gamma = Some(parse_number(v)?),
            "phantoms" => self.phantoms = Some(parse_list(v, ',')?),
            "objective" => self.objective = Some(v.to_string()),
            "facilities" => self.facilities = Some(parse_int(key, v)?),
            "profile" => self.profile = Some(parse_list(v, ',')?),
            "n_min" => self.n_min = Some(parse_int(key, v)?),
            "n_max" => self.n_max = Some(parse_int(key, v)?),
            "trials" => self.trials = Some(parse_int(key, v)?),
            "seed" => self.seed = Some(parse_int(key, v)?),
            "grid_resolution" => self.grid_resolution = Some(parse_int(key, v)?),
            "abs_tol" => self.abs_tol = Some(parse_number(v)?),
            "refine_rounds" => self.refine_rounds = Some(parse_int(key, v)?),
            "restarts" => self.restarts = Some(parse_int(key, v)?),
            "prune" => self.prune = Some(parse_bool(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            _ => return Err(CliError::Usage(format!("unknown key {key:?} (known: {})", KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Values set in `other` win.
    pub fn overlay(self, other: Self) -> Self {
        Self {
            mechanism: other.mechanism.or(self.mechanism),
            gamma: other.gamma.or(self.gamma),
            phantoms: other.phantoms.or(self.phantoms),
            objective: other.objective.or(self.objective),
            facilities: other.facilities.or(self.facilities),
            profile: other.profile.or(self.profile),
            n_min: other.n_min.or(self.n_min),
            n_max: other.n_max.or(self.n_max),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            grid_resolution: other.grid_resolution.or(self.grid_resolution),
            abs_tol: other.abs_tol.or(self.abs_tol),
            refine_rounds: other.refine_rounds.or(self.refine_rounds),
            restarts: other.restarts.or(self.restarts),
            prune: other.prune.or(self.prune),
            out: other.out.or(self.out),
        }
    }

    /// Explicit seed, else `EQUIFAC_SEED`, else 42.
    pub fn seed(&self) -> Result<u64, CliError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => parse_int(SEED_ENV, v.trim()),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    pub fn policy(&self) -> Result<NumericPolicy, CliError> {
        let d = NumericPolicy::default();
        let p = NumericPolicy {
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            grid_resolution: self.grid_resolution.unwrap_or(d.grid_resolution),
            refine_rounds: self.refine_rounds.unwrap_or(d.refine_rounds),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn mechanism_spec(&self) -> Result<Option<MechanismSpec>, CliError> {
        self.mechanism
            .as_deref()
            .map(|name| MechanismSpec::from_name(name, self.gamma, self.phantoms.clone()))
            .transpose()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn require_mechanism(&self) -> Result<MechanismSpec, CliError> {
        self.mechanism_spec()?
            .ok_or_else(|| CliError::Usage("a mechanism is required (--mechanism or mechanism = ...)".into()))
    }

    pub fn objective(&self) -> Result<Option<Objective>, CliError> {
        self.objective
            .as_deref()
            .map(|s| s.parse::<Objective>().map_err(|e| CliError::Usage(e.to_string())))
            .transpose()
    }
}
