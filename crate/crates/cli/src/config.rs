//! Optional `key=value` config files.
//!
//! Each key is a long flag name without the dashes (`n=10`, `t-end=50`,
//! `force=true`). The entries are spliced into the argument list right after
//! the subcommand, ahead of the user's own flags, so flags given on the
//! command line override the file.

use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {0}: expected key=value")]
    Syntax(usize),
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
        let key = k.trim().trim_start_matches('-').replace('_', "-");
        if key.is_empty() {
            return Err(ConfigError::Syntax(i + 1));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

const SUBCOMMANDS: [&str; 6] = ["spectrum", "walk", "ensemble", "census", "verify", "graph"];

/// Returns `args` with the config file's flags inserted after the
/// subcommand. Without `--config`, `args` is returned unchanged.
pub fn expand_args(args: Vec<String>) -> Result<Vec<String>, ConfigError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|source| ConfigError::Read {
        path: path.clone(),
        source,
    })?;
    let mut injected = Vec::new();
    for (key, value) in parse_config(&text)? {
        match value.as_str() {
            "true" => injected.push(format!("--{key}")),
            "false" => {}
            _ => {
                injected.push(format!("--{key}"));
                injected.push(value);
            }
        }
    }
    let pos = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .map(|p| p + 1)
        .unwrap_or(args.len());
    let mut out = args;
    out.splice(pos..pos, injected);
    Ok(out)
}
