//! Plain `key=value` run configuration files.
//!
//! One setting per line; blank lines and lines starting with `#` are ignored.
//! Keys are long flag names without the leading dashes (`sigma-h`, `snr-grid`),
//! and underscores are accepted in place of hyphens.

use std::path::Path;

use crate::error::{invalid, Error, Result};

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(invalid(
                "config",
                format!("line {}: expected key=value, got `{line}`", lineno + 1),
            ));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(invalid("config", format!("line {}: empty key", lineno + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Renders settings as `--key value` arguments. Callers place these before
/// the command-line flags so that explicit flags win.
pub fn to_args(settings: &[(String, String)]) -> Vec<String> {
    settings
        .iter()
        .flat_map(|(k, v)| [format!("--{k}"), v.clone()])
        .collect()
}
