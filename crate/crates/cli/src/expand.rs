//! Argument rewriting ahead of clap: config files and indexed flags.

use std::fs;

use crate::CliError;

/// Flags that take no value; in a config file they are enabled by `true`.
const SWITCHES: &[&str] = &["deg", "disclosure", "analytic", "numeric", "both"];

/// Full rewrite: config expansion, then indexed flags.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, CliError> {
    Ok(indexed_flags(with_config(args)?))
}

fn flag_name(arg: &str) -> Option<String> {
    let name = arg.strip_prefix("--")?;
    let name = name.split_once('=').map_or(name, |(n, _)| n);
    Some(name.to_ascii_lowercase())
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = k.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Appends the flags of `--config FILE` that the command line does not set.
fn with_config(mut args: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("config {path}: {e}")))?;
    let explicit: Vec<String> = args.iter().filter_map(|a| flag_name(a)).collect();
    for (key, value) in parse_config(&text)? {
        if key.eq_ignore_ascii_case("config") {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        if explicit.contains(&key.to_ascii_lowercase()) {
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "" => args.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                _ => return Err(CliError::Usage(format!("config: `{key}` expects true or false"))),
            }
        } else {
            args.push(format!("--{key}"));
            args.push(value);
        }
    }
    Ok(args)
}

/// `--bob2 SPEC` → `--bob-at 2=SPEC`, likewise `--p1`/`--q1`.
fn indexed_flags(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(body) = a.strip_prefix("--") else {
            out.push(a);
            continue;
        };
        let (name, inline) = match body.split_once('=') {
            Some((n, v)) => (n, Some(v.to_string())),
            None => (body, None),
        };
        let split = name.find(|c: char| c.is_ascii_digit());
        let target = split.and_then(|at| {
            let (stem, idx) = name.split_at(at);
            let idx_ok = idx.chars().all(|c| c.is_ascii_digit());
            match stem {
                "bob" | "p" | "q" if idx_ok => Some((stem.to_string(), idx.to_string())),
                _ => None,
            }
        });
        match target {
            Some((stem, idx)) => {
                let value = inline.or_else(|| it.next()).unwrap_or_default();
                out.push(format!("--{stem}-at"));
                out.push(format!("{idx}={value}"));
            }
            None => out.push(a),
        }
    }
    out
}
