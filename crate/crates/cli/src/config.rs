//! `key = value` run files. Their entries are spliced in ahead of the
//! command-line flags, so flags given explicitly win.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::error::{CliError, Result};

pub fn parse_config(text: &str) -> std::result::Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(format!("line {}: invalid key {:?}", n + 1, k.trim()));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Flag tokens for the entries; `true`/`false` values toggle bare switches.
pub fn config_args(entries: &[(String, String)]) -> Vec<OsString> {
    let mut args = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => args.push(format!("--{k}").into()),
            "false" => {}
            _ => {
                args.push(format!("--{k}").into());
                args.push(v.into());
            }
        }
    }
    args
}

/// Finds `--config PATH` (or `--config=PATH`) after the subcommand, removes
/// it and splices the file's flags in right after the subcommand name.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let pos = args.iter().position(|a| a == "--config");
    let eq = args
        .iter()
        .position(|a| a.to_str().is_some_and(|s| s.starts_with("--config=")));
    let (at, path, width) = match (pos, eq) {
        (Some(i), _) => {
            let p = args
                .get(i + 1)
                .ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            (i, p.clone(), 2)
        }
        (None, Some(i)) => {
            let s = args[i].to_str().unwrap();
            (i, OsString::from(&s["--config=".len()..]), 1)
        }
        (None, None) => return Ok(args),
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let entries = parse_config(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut rest = args;
    rest.drain(at..at + width);
    // argv[0] and the subcommand come first.
    let split = 2.min(rest.len());
    let mut out: Vec<OsString> = rest[..split].to_vec();
    out.extend(config_args(&entries));
    out.extend_from_slice(&rest[split..]);
    Ok(out)
}
