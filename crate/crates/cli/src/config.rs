//! `run --config`: a JSON job file is translated into the equivalent command line.

use crate::error::{CliError, CliResult};
use serde::Deserialize;
use serde_json::{Map, Value};
use std::path::Path;

const COMMANDS: [&str; 8] = [
    "soliton",
    "breather",
    "nsoliton",
    "scatter",
    "roundtrip",
    "verify",
    "jumps",
    "evolve",
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobConfig {
    command: String,
    #[serde(default)]
    parameters: Map<String, Value>,
}

fn scalar(key: &str, v: &Value) -> CliResult<String> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        Value::Array(items) => items
            .iter()
            .map(|x| match x {
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(CliError::Config(format!(
                    "parameter {key:?}: tuples must hold numbers"
                ))),
            })
            .collect::<CliResult<Vec<_>>>()
            .map(|p| p.join(",")),
        _ => Err(CliError::Config(format!(
            "parameter {key:?} has an unsupported value {v}"
        ))),
    }
}

/// Command-line words for one job.
///
/// Keys map to `--key=value` with `_` replaced by `-`. Numbers and strings
/// become values, `true` a bare flag, `false` nothing, a list of numbers one
/// comma-joined value and a list of lists or strings a repeated option.
pub fn job_argv(text: &str) -> CliResult<Vec<String>> {
    let job: JobConfig = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("invalid job file: {e}")))?;
    if !COMMANDS.contains(&job.command.as_str()) {
        return Err(CliError::Config(format!(
            "unknown command {:?}; expected one of {COMMANDS:?}",
            job.command
        )));
    }
    let mut argv = vec!["bsq".to_string(), job.command];
    for (key, v) in &job.parameters {
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items)
                if items.iter().all(|x| x.is_array() || x.is_string()) && !items.is_empty() =>
            {
                for item in items {
                    argv.push(format!("{flag}={}", scalar(key, item)?));
                }
            }
            _ => argv.push(format!("{flag}={}", scalar(key, v)?)),
        }
    }
    Ok(argv)
}

pub fn read_job(path: &Path) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    job_argv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation() {
        let argv = job_argv(
            r#"{"command": "nsoliton", "parameters": {"pole": [[2, 0, 1, 0.5]], "grid": "-5:5:11",
                "allow_singular": true, "emit_initial": false}}"#,
        )
        .unwrap();
        assert_eq!(
            argv,
            [
                "bsq",
                "nsoliton",
                "--allow-singular",
                "--grid=-5:5:11",
                "--pole=2,0,1,0.5"
            ]
        );
        let argv = job_argv(r#"{"command": "roundtrip", "parameters": {"k0": [2, 0.5]}}"#).unwrap();
        assert_eq!(argv, ["bsq", "roundtrip", "--k0=2,0.5"]);
    }

    #[test]
    fn rejects_unknown_top_level_keys_and_commands() {
        assert!(job_argv(r#"{"command": "soliton", "extra": 1}"#).is_err());
        assert!(job_argv(r#"{"command": "run"}"#).is_err());
        assert!(job_argv(r#"{"parameters": {}}"#).is_err());
    }
}
