//! `key = value` files overriding the hypercontractivity optimizer defaults.
//!
//! ```text
//! # comments and blank lines are ignored
//! grid_points = 49
//! tol = 1e-7
//! ```

use std::path::Path;
use std::str::FromStr;

use nisim::bounds::HcOptimizerConfig;

use crate::{CliError, Result};

/// Recognized keys, in the order they are documented.
pub const KEYS: [&str; 4] = ["grid_points", "refine_iters", "exclusion", "tol"];

/// Applies the overrides in `text` on top of the defaults.
pub fn parse_config(text: &str, path: &Path) -> Result<HcOptimizerConfig> {
    let mut cfg = HcOptimizerConfig::default();
    let err = |line: usize, msg: String| CliError::Config {
        path: path.to_path_buf(),
        line,
        msg,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected key = value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        fn num<T: FromStr>(value: &str) -> std::result::Result<T, String> {
            value.parse().map_err(|_| format!("cannot parse {value:?}"))
        }
        let parsed = match key {
            "grid_points" => num(value).map(|v| cfg.grid_points = v),
            "refine_iters" => num(value).map(|v| cfg.refine_iters = v),
            "exclusion" => num(value).map(|v| cfg.exclusion = v),
            "tol" => num(value).map(|v| cfg.tol = v),
            other => Err(format!("unknown key {other:?}; expected one of {KEYS:?}")),
        };
        parsed.map_err(|msg| err(line_no, msg))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Reads and parses a config file; `None` gives the defaults.
pub fn load_config(path: Option<&Path>) -> Result<HcOptimizerConfig> {
    match path {
        None => Ok(HcOptimizerConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            parse_config(&text, p)
        }
    }
}
