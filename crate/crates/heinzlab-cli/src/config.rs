//! Run configuration: defaults, the flat key=value config file, the
//! `HEINZLAB_SEED` environment variable, and flag precedence
//! (flags > config file > environment > built-in defaults).

use std::collections::BTreeMap;
use std::path::Path;

use heinzlab::norms::NormKind;
use heinzlab::suite::XKind;

use crate::CliError;
use crate::output::OutputFormat;

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Registry ids to run; empty means the whole registry.
    pub suite: Vec<String>,
    pub orders: Vec<usize>,
    /// Instances per (id, order) pair.
    pub instances: usize,
    pub seed: u64,
    pub cond_cap: f64,
    /// Extra norms on top of the automatic Ky Fan sweep.
    pub norms: Vec<NormKind>,
    pub tol: f64,
    pub out: Option<String>,
    pub format: OutputFormat,
    pub x_kind: XKind,
    /// Explicit parameter overrides applied on top of the per-check sampler.
    pub nu: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub ladder_n: Option<u32>,
    pub ladder_m: Option<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: Vec::new(),
            orders: vec![1, 2, 3, 4, 5, 6],
            instances: 5,
            seed: 42,
            cond_cap: 1e4,
            norms: default_extra_norms(),
            tol: 1e-9,
            out: None,
            format: OutputFormat::JsonLines,
            x_kind: XKind::General,
            nu: None,
            alpha: None,
            beta: None,
            ladder_n: None,
            ladder_m: None,
        }
    }
}

pub fn default_extra_norms() -> Vec<NormKind> {
    vec![
        NormKind::Schatten(1.0),
        NormKind::Schatten(1.5),
        NormKind::Schatten(2.0),
        NormKind::Schatten(3.0),
        NormKind::Schatten(f64::INFINITY),
    ]
}

/// Raw key=value pairs from a config file. Unknown keys are rejected so
/// typos do not silently fall back to defaults.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config line {} is not key=value: '{raw}'",
                lineno + 1
            )));
        };
        let key = key.trim().replace('-', "_");
        let known = [
            "suite", "orders", "instances", "seed", "cond_cap", "norms", "tol", "out", "format",
            "x_kind", "nu", "alpha", "beta", "ladder_n", "ladder_m",
        ];
        if !known.contains(&key.as_str()) {
            return Err(CliError::usage(format!(
                "unknown config key '{key}' on line {}",
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_list<T, E>(value: &str, what: &str, f: impl Fn(&str) -> Result<T, E>) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(s).map_err(|_| CliError::usage(format!("bad {what} entry '{s}'"))))
        .collect()
}

pub fn parse_norm_list(value: &str) -> Result<Vec<NormKind>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| NormKind::parse(s).map_err(|e| CliError::usage(e.to_string())))
        .collect()
}

/// Applies config-file values onto `cfg` (defaults or env already applied).
pub fn apply_config_map(cfg: &mut RunConfig, map: &BTreeMap<String, String>) -> Result<(), CliError> {
    for (key, value) in map {
        match key.as_str() {
            "suite" => {
                cfg.suite = if value == "all" {
                    Vec::new()
                } else {
                    value.split(',').map(|s| s.trim().to_string()).collect()
                }
            }
            "orders" => cfg.orders = parse_list(value, "order", |s| s.parse::<usize>())?,
            "instances" => {
                cfg.instances = value
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad instances '{value}'")))?
            }
            "seed" => {
                cfg.seed = value
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad seed '{value}'")))?
            }
            "cond_cap" => {
                cfg.cond_cap = value
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad cond_cap '{value}'")))?
            }
            "norms" => cfg.norms = parse_norm_list(value)?,
            "tol" => {
                cfg.tol = value
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad tol '{value}'")))?
            }
            "out" => cfg.out = Some(value.clone()),
            "format" => cfg.format = OutputFormat::parse(value)?,
            "x_kind" => {
                cfg.x_kind = XKind::parse(value).map_err(|e| CliError::usage(e.to_string()))?
            }
            "nu" => cfg.nu = Some(parse_f64(value, "nu")?),
            "alpha" => cfg.alpha = Some(parse_f64(value, "alpha")?),
            "beta" => cfg.beta = Some(parse_f64(value, "beta")?),
            "ladder_n" => {
                cfg.ladder_n = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::usage(format!("bad ladder_n '{value}'")))?,
                )
            }
            "ladder_m" => {
                cfg.ladder_m = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::usage(format!("bad ladder_m '{value}'")))?,
                )
            }
            _ => unreachable!("keys validated in parse_config_file"),
        }
    }
    Ok(())
}

fn parse_f64(value: &str, what: &str) -> Result<f64, CliError> {
    value
        .parse()
        .map_err(|_| CliError::usage(format!("bad {what} '{value}'")))
}

/// Seed from `HEINZLAB_SEED` when set; rejects unparsable values.
pub fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var("HEINZLAB_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| CliError::usage(format!("HEINZLAB_SEED is not a u64: '{v}'"))),
        Err(_) => Ok(None),
    }
}
