//! Optional `key=value` config files mirroring the CLI flags.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{Error, Result};

/// Parses config text into `(key, value)` pairs. Blank lines and `#`
/// comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(n, l)| {
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("config line {}: expected key=value", n + 1)))?;
            Ok((k.trim().trim_start_matches("--").to_string(), v.trim().to_string()))
        })
        .collect()
}

fn to_args(pairs: Vec<(String, String)>) -> Vec<OsString> {
    let mut args = Vec::new();
    for (k, v) in pairs {
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

/// Removes `--config <file>` from `argv` and splices the file's settings in
/// right after the subcommand, so explicit flags given later win.
pub fn expand_config_args(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut config = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| Error::InvalidParams("--config needs a file".into()))?;
            config = Some(path);
        } else if let Some(path) = s.strip_prefix("--config=") {
            config = Some(path.into());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let extra = to_args(parse_config(&text)?);
    // program name, then the subcommand
    let at = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map_or(rest.len(), |p| p + 2);
    let tail = rest.split_off(at.min(rest.len()));
    rest.extend(extra);
    rest.extend(tail);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let pairs = parse_config("# preset\npreset = irma\n\nmetric=l2 # distance\npad-only=true\n").unwrap();
        assert_eq!(
            pairs,
            vec![
                ("preset".into(), "irma".into()),
                ("metric".into(), "l2".into()),
                ("pad-only".into(), "true".into())
            ]
        );
        assert!(parse_config("oops").is_err());
    }

    #[test]
    fn splices_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.conf");
        std::fs::write(&cfg, "bins=7\npad-only=true\nnormalize=false\n").unwrap();
        let argv: Vec<OsString> = ["lrd", "describe", "--config", cfg.to_str().unwrap(), "--bins", "9"]
            .iter()
            .map(OsString::from)
            .collect();
        let out: Vec<String> = expand_config_args(argv)
            .unwrap()
            .into_iter()
            .map(|a| a.into_string().unwrap())
            .collect();
        assert_eq!(out, ["lrd", "describe", "--bins", "7", "--pad-only", "--bins", "9"]);
    }
}
