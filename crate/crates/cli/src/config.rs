//! Sweep configuration, from flags and an optional `key = value` file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Complexity,
    Variance,
    Distribution,
    Autocorrelator,
    Lanczos,
    Verify,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "complexity" => Mode::Complexity,
            "variance" => Mode::Variance,
            "distribution" => Mode::Distribution,
            "autocorrelator" => Mode::Autocorrelator,
            "lanczos" => Mode::Lanczos,
            "verify" => Mode::Verify,
            other => return Err(CliError::Config(format!("unknown mode `{other}`"))),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Complexity => "complexity",
            Mode::Variance => "variance",
            Mode::Distribution => "distribution",
            Mode::Autocorrelator => "autocorrelator",
            Mode::Lanczos => "lanczos",
            Mode::Verify => "verify",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Largest truncation accepted from the command line.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub alpha: f64,
    pub beta: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// Number of grid points, endpoints included.
    pub steps: usize,
    /// Truncation of the Fock space; oracle runs use at least this.
    pub dim: usize,
    /// Target for the missing probability of amplitude series.
    pub tol: f64,
    pub mode: Mode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            alpha: 1.0,
            beta: 1.0,
            t_min: 0.0,
            t_max: 1.0,
            steps: 11,
            dim: 256,
            tol: 1e-12,
            mode: Mode::Complexity,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(CliError::Config(msg.to_owned()));
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return bad("alpha and beta must be finite");
        }
        if !(self.t_min.is_finite() && self.t_max.is_finite()) || self.t_min > self.t_max {
            return bad("need finite t_min <= t_max");
        }
        if self.t_min < 0.0 {
            return bad("times must be non-negative");
        }
        if self.steps < 1 {
            return bad("steps must be at least 1");
        }
        if self.dim < 8 || self.dim > MAX_DIM {
            return bad("dim must lie in 8..=4096");
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad("tol must lie in (0, 1)");
        }
        Ok(())
    }

    /// Evenly spaced times from `t_min` to `t_max`.
    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t_min];
        }
        let h = (self.t_max - self.t_min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.t_max } else { self.t_min + h * i as f64 }).collect()
    }
}

/// Values that may be set from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub dim: Option<usize>,
    pub tol: Option<f64>,
    pub mode: Option<Mode>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| CliError::Config(format!("bad value `{value}` for `{key}`")))
}

impl Overrides {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            match key {
                "alpha" => o.alpha = Some(parse_value(key, value)?),
                "beta" => o.beta = Some(parse_value(key, value)?),
                "tmin" | "t_min" => o.t_min = Some(parse_value(key, value)?),
                "tmax" | "t_max" => o.t_max = Some(parse_value(key, value)?),
                "steps" => o.steps = Some(parse_value(key, value)?),
                "dim" => o.dim = Some(parse_value(key, value)?),
                "tol" => o.tol = Some(parse_value(key, value)?),
                "mode" => o.mode = Some(value.parse()?),
                "format" => o.format = Some(value.parse()?),
                "out" => o.out = Some(PathBuf::from(value)),
                other => return Err(CliError::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(o)
    }

    /// `self` wins wherever it is set.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            alpha: self.alpha.or(base.alpha),
            beta: self.beta.or(base.beta),
            t_min: self.t_min.or(base.t_min),
            t_max: self.t_max.or(base.t_max),
            steps: self.steps.or(base.steps),
            dim: self.dim.or(base.dim),
            tol: self.tol.or(base.tol),
            mode: self.mode.or(base.mode),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
        }
    }

    pub fn into_config(self) -> Result<(SweepConfig, Format, Option<PathBuf>)> {
        let d = SweepConfig::default();
        let cfg = SweepConfig {
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            t_min: self.t_min.unwrap_or(d.t_min),
            t_max: self.t_max.unwrap_or(d.t_max),
            steps: self.steps.unwrap_or(d.steps),
            dim: self.dim.unwrap_or(d.dim),
            tol: self.tol.unwrap_or(d.tol),
            mode: self.mode.unwrap_or(d.mode),
        };
        cfg.validate()?;
        Ok((cfg, self.format.unwrap_or_default(), self.out))
    }
}
