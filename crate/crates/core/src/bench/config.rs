//! Flat `key = value` run-configuration files: one assignment per line,
//! comma-separated lists, `#` comments. Diff-friendly and dependency-free.
//!
//! ```text
//! equation  = bo
//! problem   = traveling-wave
//! c         = 1.1936620731892151
//! k_list    = 8, 16, 32, 64
//! t_list    = 1
//! solvers   = exact-scheme, rk4
//! reference = analytic
//! ```

use std::collections::BTreeMap;

use crate::problems::RandomDataSpec;
use crate::scheme::EquationKind;

use super::{BenchError, ProblemSpec, ReferenceSpec, RunConfig, SolverKind};

/// Default traveling-wave speed `15/(4 pi)`: a gently peaked profile whose
/// coefficients decay by ~0.297 per mode.
pub const DEFAULT_WAVE_SPEED: f64 = 15.0 / (4.0 * std::f64::consts::PI);

const KNOWN_KEYS: &[&str] = &[
    "equation",
    "problem",
    "c",
    "seed",
    "s",
    "theta",
    "k_ref",
    "k_list",
    "t_list",
    "r_list",
    "solvers",
    "reference",
    "cfl_c",
    "dealias",
    "amplitude",
    "jobs",
];

fn err(msg: impl Into<String>) -> BenchError {
    BenchError::Config(msg.into())
}

/// Parses the flat key=value format into a validated-on-run [`RunConfig`].
pub fn parse_config(text: &str) -> Result<RunConfig, BenchError> {
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("line {}: expected `key = value`, got `{raw}`", i + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            return Err(err(format!(
                "line {}: unknown key `{key}` (known keys: {})",
                i + 1,
                KNOWN_KEYS.join(", ")
            )));
        }
        if map.insert(key, value).is_some() {
            return Err(err(format!("line {}: duplicate key `{key}`", i + 1)));
        }
    }
    build(&map)
}

fn build(map: &BTreeMap<&str, &str>) -> Result<RunConfig, BenchError> {
    let require = |key: &str| {
        map.get(key)
            .copied()
            .ok_or_else(|| err(format!("missing required key `{key}`")))
    };
    let f64_at = |key: &str| -> Result<Option<f64>, BenchError> {
        map.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| err(format!("key `{key}`: bad number `{v}`: {e}")))
            })
            .transpose()
    };

    let equation: EquationKind = require("equation")?.parse().map_err(err)?;

    let problem = match require("problem")? {
        "traveling-wave" => {
            for key in ["seed", "s", "theta"] {
                if map.contains_key(key) {
                    return Err(err(format!(
                        "key `{key}` only applies to the random problem"
                    )));
                }
            }
            ProblemSpec::TravelingWave {
                c: f64_at("c")?.unwrap_or(DEFAULT_WAVE_SPEED),
            }
        }
        "random" => {
            if map.contains_key("c") {
                return Err(err("key `c` only applies to the traveling-wave problem"));
            }
            let mut spec = RandomDataSpec::new(0, 2.0, k_ref(map)?);
            if let Some(seed) = map.get("seed") {
                spec.seed = seed
                    .parse()
                    .map_err(|e| err(format!("key `seed`: bad integer `{seed}`: {e}")))?;
            }
            if let Some(s) = f64_at("s")? {
                spec.s = s;
            }
            if let Some(theta) = f64_at("theta")? {
                spec.theta = theta;
            }
            ProblemSpec::Random(spec)
        }
        other => {
            return Err(err(format!(
                "unknown problem `{other}` (expected traveling-wave or random)"
            )))
        }
    };

    let reference = match map.get("reference").copied() {
        Some("analytic") => ReferenceSpec::Analytic,
        Some("self") => ReferenceSpec::SelfAtKRef { k_ref: k_ref(map)? },
        Some(other) => {
            return Err(err(format!(
                "unknown reference `{other}` (expected analytic or self)"
            )))
        }
        None => match problem {
            ProblemSpec::TravelingWave { .. } => ReferenceSpec::Analytic,
            ProblemSpec::Random(spec) => ReferenceSpec::SelfAtKRef { k_ref: spec.k_ref },
        },
    };

    let solvers = match map.get("solvers") {
        Some(value) => list(value, "solvers")?
            .iter()
            .map(|s| s.parse::<SolverKind>().map_err(err))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![SolverKind::ExactScheme],
    };

    Ok(RunConfig {
        equation,
        problem,
        k_list: usize_list(require("k_list")?, "k_list")?,
        t_list: f64_list(require("t_list")?, "t_list")?,
        r_list: match map.get("r_list") {
            Some(value) => f64_list(value, "r_list")?,
            None => vec![0.0],
        },
        solvers,
        reference,
        cfl_c: f64_at("cfl_c")?.unwrap_or(0.25),
        dealias: match map.get("dealias").copied() {
            Some("true") | None => true,
            Some("false") => false,
            Some(other) => {
                return Err(err(format!(
                    "key `dealias`: expected true or false, got `{other}`"
                )))
            }
        },
        amplitude: f64_at("amplitude")?.unwrap_or(1.0),
        jobs: match map.get("jobs") {
            Some(v) => v
                .parse()
                .map_err(|e| err(format!("key `jobs`: bad integer `{v}`: {e}")))?,
            None => 1,
        },
    })
}

fn k_ref(map: &BTreeMap<&str, &str>) -> Result<usize, BenchError> {
    match map.get("k_ref") {
        Some(v) => v
            .parse()
            .map_err(|e| err(format!("key `k_ref`: bad integer `{v}`: {e}"))),
        None => Ok(1024),
    }
}

fn list<'a>(value: &'a str, key: &str) -> Result<Vec<&'a str>, BenchError> {
    let items: Vec<&str> = value.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(err(format!("key `{key}`: empty list entry in `{value}`")));
    }
    Ok(items)
}

fn f64_list(value: &str, key: &str) -> Result<Vec<f64>, BenchError> {
    list(value, key)?
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| err(format!("key `{key}`: bad number `{s}`: {e}")))
        })
        .collect()
}

fn usize_list(value: &str, key: &str) -> Result<Vec<usize>, BenchError> {
    list(value, key)?
        .iter()
        .map(|s| {
            s.parse::<usize>()
                .map_err(|e| err(format!("key `{key}`: bad integer `{s}`: {e}")))
        })
        .collect()
}
