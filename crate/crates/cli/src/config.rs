//! Flat TOML configuration whose keys match the long flag names.

use std::path::Path;

use crate::{CliError, Common, Format};

const KEYS: &[&str] = &[
    "m",
    "gamma",
    "k",
    "hbar",
    "n-max",
    "margin",
    "theta",
    "chi-sign",
    "branch",
    "n-cap",
    "format",
    "out",
    "tol-scale",
];

fn number(key: &str, v: &toml::Value) -> Result<f64, CliError> {
    match v {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(CliError::Usage(format!(
            "config key '{key}' must be a number"
        ))),
    }
}

fn count(key: &str, v: &toml::Value) -> Result<usize, CliError> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(CliError::Usage(format!(
            "config key '{key}' must be a non-negative integer"
        ))),
    }
}

fn text(key: &str, v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        _ => Err(CliError::Usage(format!(
            "config key '{key}' must be a string"
        ))),
    }
}

/// Fills every option not given on the command line from the file.
pub fn merge(common: &mut Common, path: &Path) -> Result<(), CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = raw
        .parse()
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
    for (key, v) in &table {
        let key = key.replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown config key '{key}'")));
        }
        match key.as_str() {
            "m" => fill(&mut common.m, number(&key, v)?),
            "gamma" => fill(&mut common.gamma, number(&key, v)?),
            "k" => fill(&mut common.k, number(&key, v)?),
            "hbar" => fill(&mut common.hbar, number(&key, v)?),
            "n-max" => fill(&mut common.n_max, count(&key, v)?),
            "margin" => fill(&mut common.margin, count(&key, v)?),
            "n-cap" => fill(&mut common.n_cap, count(&key, v)?),
            "tol-scale" => fill(&mut common.tol_scale, number(&key, v)?),
            "theta" => {
                if common.theta.is_none() {
                    common.theta = Some(match v {
                        toml::Value::Array(items) => items
                            .iter()
                            .map(|x| number(&key, x))
                            .collect::<Result<_, _>>()?,
                        other => vec![number(&key, other)?],
                    });
                }
            }
            "branch" => fill(&mut common.branch, parse(&key, &text(&key, v)?)?),
            "chi-sign" => fill(&mut common.chi_sign, parse(&key, &text(&key, v)?)?),
            "format" => {
                let f = match text(&key, v)?.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    other => return Err(CliError::Usage(format!("unknown format '{other}'"))),
                };
                fill(&mut common.format, f);
            }
            "out" => fill(&mut common.out, text(&key, v)?.into()),
            _ => unreachable!("key list checked above"),
        }
    }
    Ok(())
}

fn fill<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}

fn parse<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    s.parse()
        .map_err(|e| CliError::Usage(format!("config key '{key}': {e}")))
}
