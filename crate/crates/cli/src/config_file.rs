//! Optional key=value configuration files. Lines are `key = value` (with
//! or without spaces); `#` starts a comment. A file only fills in flags
//! that were not given on the command line.

use std::collections::HashMap;
use std::path::Path;

use nsga3_core::error::Error;

use crate::{AssocMode, ChecksMode, ParamsMode, RunArgs};

pub(crate) fn load(path: &Path) -> Result<HashMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidParameter(format!(
                "{}:{}: expected key=value, got '{raw}'",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Error> {
    value.parse().map_err(|_| {
        Error::InvalidParameter(format!("config key '{key}' has invalid value '{value}'"))
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool, Error> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(Error::InvalidParameter(format!(
            "config key '{key}' has invalid boolean '{value}'"
        ))),
    }
}

pub(crate) fn apply_run(
    overlay: &HashMap<String, String>,
    args: &mut RunArgs,
) -> Result<(), Error> {
    for (key, value) in overlay {
        match key.as_str() {
            "params" => {
                if args.params.is_none() {
                    args.params = Some(match value.as_str() {
                        "auto" => ParamsMode::Auto,
                        "manual" => ParamsMode::Manual,
                        _ => {
                            return Err(Error::InvalidParameter(format!(
                                "config key 'params' has invalid value '{value}'"
                            )))
                        }
                    });
                }
            }
            "mu" => args.mu = args.mu.or(Some(parse(key, value)?)),
            "p" => args.p = args.p.or(Some(parse(key, value)?)),
            "eps_nad" => args.eps_nad = args.eps_nad.or(Some(parse(key, value)?)),
            "seed" => args.seed = args.seed.or(Some(parse(key, value)?)),
            "max_generations" => {
                args.max_generations = args.max_generations.or(Some(parse(key, value)?))
            }
            "checks" => {
                if args.checks.is_none() {
                    args.checks = Some(match value.as_str() {
                        "off" => ChecksMode::Off,
                        "record" => ChecksMode::Record,
                        "strict" => ChecksMode::Strict,
                        _ => {
                            return Err(Error::InvalidParameter(format!(
                                "config key 'checks' has invalid value '{value}'"
                            )))
                        }
                    });
                }
            }
            "assoc" => {
                if args.assoc.is_none() {
                    args.assoc = Some(match value.as_str() {
                        "auto" => AssocMode::Auto,
                        "exhaustive" => AssocMode::Exhaustive,
                        "lattice" => AssocMode::Lattice,
                        _ => {
                            return Err(Error::InvalidParameter(format!(
                                "config key 'assoc' has invalid value '{value}'"
                            )))
                        }
                    });
                }
            }
            "lattice_radius" => {
                args.lattice_radius = args.lattice_radius.or(Some(parse(key, value)?))
            }
            "faithful" => args.faithful = args.faithful || parse_bool(key, value)?,
            "trace" => args.trace = args.trace || parse_bool(key, value)?,
            "audit" => args.audit = args.audit || parse_bool(key, value)?,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown config key '{other}'"
                )))
            }
        }
    }
    Ok(())
}
