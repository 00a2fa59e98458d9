//! Line-based `key = value` experiment configuration.
//!
//! ```text
//! # Table 4 cell
//! spec = 1000,0.003,500,0.999,1
//! p = 1
//! q = 2..6
//! epsilon = 1e-4
//! criterion = residual
//! init = identity
//! seeds = 10
//! ```
//!
//! `spec` may repeat. Lists accept `a,b,c` or `a..b` (inclusive).

use std::path::{Path, PathBuf};

use super::experiment::ExperimentConfig;
use crate::error::{invalid, Error, Result};
use crate::iteration::{InitPolicy, StopCriterion};
use crate::matgen::MatrixSpec;

/// Parses `a,b,c`, `a..b` (inclusive) or a single integer.
pub fn parse_u32_list(s: &str) -> Result<Vec<u32>> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| invalid(format!("not an integer: {t:?}")));
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(invalid(format!("empty range {s:?}")));
        }
        return Ok((a..=b).collect());
    }
    let v = s.split(',').map(num).collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return Err(invalid("empty list"));
    }
    Ok(v)
}

/// `identity`, `scaled-identity:alpha`, `scaled-a:alpha` or `pan-reif`.
pub fn parse_init(s: &str) -> Result<InitPolicy<f64>> {
    let (name, arg) = match s.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (s, None),
    };
    let alpha = || -> Result<f64> {
        match arg {
            None => Ok(1.0),
            Some(a) => match a.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
                _ => Err(invalid(format!("init scale must be positive, got {a:?}"))),
            },
        }
    };
    match name {
        "identity" if arg.is_none() => Ok(InitPolicy::Identity),
        "scaled-identity" => Ok(InitPolicy::ScaledIdentity(alpha()?)),
        "scaled-a" => Ok(InitPolicy::ScaledA(alpha()?)),
        "pan-reif" if arg.is_none() => Ok(InitPolicy::PanReif),
        _ => Err(invalid(format!("unknown init policy {s:?}"))),
    }
}

pub fn parse_criterion(s: &str) -> Result<StopCriterion> {
    match s {
        "residual" => Ok(StopCriterion::ResidualNorm),
        "error" => Ok(StopCriterion::ErrorNorm),
        _ => Err(invalid(format!("criterion must be residual or error, got {s:?}"))),
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

pub fn read_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut have_p = false;
    let mut have_q = false;
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Config { line, msg };
        let (key, value) = body.split_once('=').ok_or_else(|| err(format!("expected key = value, got {body:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let wrap = |e: Error| err(e.to_string());
        match key {
            "spec" => cfg.specs.push(value.parse::<MatrixSpec>().map_err(wrap)?),
            "p" => {
                cfg.ps = parse_u32_list(value).map_err(wrap)?;
                have_p = true;
            }
            "q" => {
                cfg.qs = parse_u32_list(value).map_err(wrap)?;
                have_q = true;
            }
            "epsilon" => {
                cfg.epsilon = value.parse().map_err(|_| err(format!("bad epsilon {value:?}")))?;
            }
            "criterion" => cfg.stop_criterion = parse_criterion(value).map_err(wrap)?,
            "init" => cfg.init_policy = parse_init(value).map_err(wrap)?,
            "seeds" => cfg.seeds_per_cell = value.parse().map_err(|_| err(format!("bad seeds {value:?}")))?,
            "max_iter" => cfg.max_iter = value.parse().map_err(|_| err(format!("bad max_iter {value:?}")))?,
            "precision" => cfg.precision = parse_bool(value).ok_or_else(|| err(format!("bad bool {value:?}")))?,
            "track_error" => {
                cfg.track_error = parse_bool(value).ok_or_else(|| err(format!("bad bool {value:?}")))?
            }
            "out" => cfg.output = Some(PathBuf::from(value)),
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    if !have_p || !have_q {
        return Err(Error::Config { line: 0, msg: "p and q are required".into() });
    }
    cfg.validate()?;
    Ok(cfg)
}
