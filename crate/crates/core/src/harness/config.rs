//! Experiment configuration and its flat `key = value` file format.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::examples::{ExampleId, ExponentReading};
use crate::error::{Error, Result};

/// Largest column count picked by [`MhatChoice::Auto`].
pub const AUTO_MHAT_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MhatChoice {
    /// `min(10, N)`.
    #[default]
    Auto,
    Fixed(usize),
}

impl MhatChoice {
    pub fn resolve(&self, n: usize) -> usize {
        match *self {
            MhatChoice::Auto => n.min(AUTO_MHAT_CAP),
            MhatChoice::Fixed(m) => m,
        }
    }
}

impl FromStr for MhatChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "auto" {
            return Ok(MhatChoice::Auto);
        }
        s.parse()
            .map(MhatChoice::Fixed)
            .map_err(|_| Error::Config(format!("M̂ must be `auto` or a positive integer, got `{s}`")))
    }
}

impl fmt::Display for MhatChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MhatChoice::Auto => f.write_str("auto"),
            MhatChoice::Fixed(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// One experiment: which signal, how many samples, how much noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub example: ExampleId,
    /// Half the number of samples; also the Hankel row count.
    pub n: usize,
    pub delta: f64,
    /// Seeds the model (circle coefficients) and, unless overridden, the noise.
    pub seed: u64,
    pub noise_seed: Option<u64>,
    pub mhat: MhatChoice,
    /// Domain bound of `e(h)`; the example default when absent.
    pub b: Option<f64>,
    pub k0: i64,
    pub reading: ExponentReading,
    pub cluster_tol: f64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            example: ExampleId::Ex1,
            n: 12,
            delta: 0.0,
            seed: 0,
            noise_seed: None,
            mhat: MhatChoice::Auto,
            b: None,
            k0: 0,
            reading: ExponentReading::Exponents,
            cluster_tol: 1e-3,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

impl ExperimentConfig {
    pub fn new(example: ExampleId, n: usize, delta: f64) -> Self {
        ExperimentConfig {
            example,
            n,
            delta,
            ..Default::default()
        }
    }

    pub fn mhat_value(&self) -> usize {
        self.mhat.resolve(self.n)
    }

    pub fn noise_seed(&self) -> u64 {
        self.noise_seed.unwrap_or(self.seed)
    }

    pub fn domain_bound(&self) -> f64 {
        self.b.unwrap_or_else(|| self.example.default_b())
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "example" => self.example = value.parse()?,
            "n" | "N" => self.n = parse_num(key, value)?,
            "delta" => self.delta = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "noise_seed" => self.noise_seed = Some(parse_num(key, value)?),
            "mhat" => self.mhat = value.parse()?,
            "b" => self.b = Some(parse_num(key, value)?),
            "k0" => self.k0 = parse_num(key, value)?,
            "reading" => self.reading = value.parse()?,
            "cluster_tol" => self.cluster_tol = parse_num(key, value)?,
            "output" | "out" => self.output = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parse the flat format: one `key = value` per line, `#` starts a comment.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            cfg.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_kv_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("N must be positive".into()));
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::Config(format!("delta must be finite and >= 0, got {}", self.delta)));
        }
        let mhat = self.mhat_value();
        if mhat == 0 || mhat > self.n {
            return Err(Error::Config(format!("need 1 <= M̂ <= N, got M̂ = {mhat}, N = {}", self.n)));
        }
        if let Some(b) = self.b {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::Config(format!("b must be positive, got {b}")));
            }
        }
        if !(self.cluster_tol.is_finite() && self.cluster_tol > 0.0) {
            return Err(Error::Config("cluster_tol must be positive".into()));
        }
        Ok(())
    }
}
