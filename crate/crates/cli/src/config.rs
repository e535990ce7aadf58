//! Job configuration: a flat `key = value` file merged with command-line
//! `key=value` overrides (overrides win), validated against the keys each
//! command understands.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Usage(format!("unknown format '{other}' (expected json or csv)"))),
        }
    }
}

/// A key a command accepts, with its default and a one-line description.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

/// Keys every command accepts in a config file (the matching flags override them).
pub const COMMON_KEYS: [&str; 4] = ["out", "format", "seed", "threads"];

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Parsed and merged parameters for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: &'static str,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub threads: Option<usize>,
    values: BTreeMap<String, String>,
}

/// Command-line side of the merge: the common flags plus `key=value` pairs.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub pairs: Vec<String>,
}

fn split_pair(text: &str, origin: &str) -> Result<(String, String), CliError> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("{origin}: expected key = value, got '{text}'")))?;
    let key = k.trim();
    if key.is_empty() {
        return Err(CliError::Usage(format!("{origin}: empty key in '{text}'")));
    }
    Ok((key.to_string(), v.trim().to_string()))
}

/// Reads a flat config file: one `key = value` per line, `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text, &path.display().to_string())
}

pub fn parse_config_text(text: &str, origin: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = split_pair(line, &format!("{origin}:{}", i + 1))?;
        if out.iter().any(|(existing, _)| *existing == k) {
            return Err(CliError::Usage(format!("{origin}:{}: duplicate key '{k}'", i + 1)));
        }
        out.push((k, v));
    }
    Ok(out)
}

impl JobConfig {
    /// Merges defaults, the config file and overrides for `command`, rejecting
    /// any key the command does not know.
    pub fn build(
        command: &'static str,
        keys: &[KeySpec],
        default_format: Format,
        overrides: &Overrides,
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<String, String> =
            keys.iter().map(|k| (k.name.to_string(), k.default.to_string())).collect();
        let mut common: BTreeMap<String, String> = BTreeMap::new();
        let mut layers = Vec::new();
        if let Some(path) = &overrides.config {
            layers.push(read_config_file(path)?);
        }
        let mut cli_pairs: Vec<(String, String)> = Vec::new();
        for p in &overrides.pairs {
            let (k, v) = split_pair(p, "argument")?;
            if cli_pairs.iter().any(|(existing, _)| *existing == k) {
                return Err(CliError::Usage(format!("argument: duplicate key '{k}'")));
            }
            cli_pairs.push((k, v));
        }
        layers.push(cli_pairs);
        for layer in layers {
            for (k, v) in layer {
                if COMMON_KEYS.contains(&k.as_str()) {
                    common.insert(k, v);
                } else if values.contains_key(&k) {
                    values.insert(k, v);
                } else {
                    let known: Vec<&str> = keys.iter().map(|k| k.name).collect();
                    return Err(CliError::Usage(format!(
                        "unknown key '{k}' for {command} (known: {})",
                        known.join(", ")
                    )));
                }
            }
        }

        let format = match (&overrides.format, common.get("format")) {
            (Some(f), _) => Format::parse(f)?,
            (None, Some(f)) => Format::parse(f)?,
            (None, None) => default_format,
        };
        let seed = match (overrides.seed, common.get("seed")) {
            (Some(s), _) => s,
            (None, Some(s)) => s.parse().map_err(|_| CliError::Usage(format!("seed: not an integer: '{s}'")))?,
            (None, None) => DEFAULT_SEED,
        };
        let threads = match (overrides.threads, common.get("threads")) {
            (Some(t), _) => Some(t),
            (None, Some(t)) => Some(t.parse().map_err(|_| CliError::Usage(format!("threads: not an integer: '{t}'")))?),
            (None, None) => None,
        };
        if threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        let out = overrides.out.clone().or_else(|| common.get("out").map(PathBuf::from));
        Ok(Self { command, out, format, seed, threads, values })
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_else(|| panic!("key '{key}' is not declared for {}", self.command))
    }

    /// All parameters (after merging) in key order, for echoing into reports.
    pub fn parameters(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<T, CliError> {
        let raw = self.raw(key);
        raw.parse().map_err(|_| CliError::Usage(format!("{key}: expected {what}, got '{raw}'")))
    }

    pub fn u32(&self, key: &str) -> Result<u32, CliError> {
        self.parse(key, "a non-negative integer")
    }

    pub fn i32(&self, key: &str) -> Result<i32, CliError> {
        self.parse(key, "an integer")
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.parse(key, "a non-negative integer")
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v: f64 = self.parse(key, "a number")?;
        if !v.is_finite() {
            return Err(CliError::Usage(format!("{key}: must be finite")));
        }
        Ok(v)
    }

    pub fn bool(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(CliError::Usage(format!("{key}: expected true or false, got '{other}'"))),
        }
    }

    /// Optional value: an empty string means "not given".
    pub fn optional(&self, key: &str) -> Option<&str> {
        Some(self.raw(key)).filter(|v| !v.is_empty())
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        self.raw(key)
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Usage(format!("{key}: '{s}' is not a finite number")))
            })
            .collect()
    }

    pub fn u32_list(&self, key: &str) -> Result<Vec<u32>, CliError> {
        self.raw(key)
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("{key}: '{s}' is not an integer"))))
            .collect()
    }

    pub fn vector3(&self, key: &str) -> Result<[f64; 3], CliError> {
        let v = self.f64_list(key)?;
        <[f64; 3]>::try_from(v).map_err(|_| CliError::Usage(format!("{key}: expected three comma-separated numbers")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KEYS: [KeySpec; 2] = [
        KeySpec { name: "alpha", default: "1", help: "" },
        KeySpec { name: "zeta", default: "1.0", help: "" },
    ];

    #[test]
    fn file_then_flags() {
        let dir = std::env::temp_dir().join(format!("spinorbasis-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("job.conf");
        fs::write(&path, "# comment\nalpha = 0\nzeta=2.5 # trailing\nseed = 9\nformat = csv\n").unwrap();
        let overrides =
            Overrides { config: Some(path), pairs: vec!["zeta=3".into()], seed: Some(11), ..Default::default() };
        let cfg = JobConfig::build("gram", &KEYS, Format::Json, &overrides).unwrap();
        assert_eq!(cfg.i32("alpha").unwrap(), 0);
        assert_eq!(cfg.f64("zeta").unwrap(), 3.0);
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.format, Format::Csv);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn unknown_and_duplicate_keys_are_usage_errors() {
        let overrides = Overrides { pairs: vec!["beta=1".into()], ..Default::default() };
        assert!(matches!(JobConfig::build("gram", &KEYS, Format::Json, &overrides), Err(CliError::Usage(_))));
        assert!(matches!(parse_config_text("a=1\na=2", "x"), Err(CliError::Usage(_))));
        assert!(matches!(parse_config_text("novalue", "x"), Err(CliError::Usage(_))));
    }

    #[test]
    fn typed_getters_reject_garbage() {
        let overrides = Overrides { pairs: vec!["alpha=one".into(), "zeta=nan".into()], ..Default::default() };
        let cfg = JobConfig::build("gram", &KEYS, Format::Json, &overrides).unwrap();
        assert!(cfg.i32("alpha").is_err());
        assert!(cfg.f64("zeta").is_err());
    }
}
