//! `key = value` configuration files. Each key is a long flag name of the
//! subcommand; the pairs are spliced in front of the command-line flags so
//! that flags given explicitly win.

use std::ffi::OsString;
use std::fs;

use crate::error::CliError;

pub fn read_pairs(path: &str) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{path}:{}: expected `key = value`", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if k == "config" {
            return Err(CliError::Usage(format!("{path}:{}: nested config", i + 1)));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

/// Inserts `--key value` pairs right after the subcommand name.
pub fn splice(args: &[OsString], subcommand: &str, pairs: &[(String, String)]) -> Vec<OsString> {
    let pos = args
        .iter()
        .skip(1)
        .position(|a| a == subcommand)
        .map(|p| p + 2)
        .unwrap_or(args.len());
    let mut out: Vec<OsString> = args[..pos].to_vec();
    for (k, v) in pairs {
        out.push(format!("--{k}").into());
        out.push(v.into());
    }
    out.extend_from_slice(&args[pos..]);
    out
}
