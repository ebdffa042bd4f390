//! Flat `key = value` config files whose keys mirror the long CLI flags.

use std::path::PathBuf;

use permuton_lab_core::ClassSpec;

use crate::error::{LabError, LabResult};

/// Parses a config file into `(key, value)` pairs in file order.
///
/// Blank lines and lines starting with `#` are skipped. Keys are lowercase
/// flag names (`[a-z0-9-]`, underscores read as dashes) and may appear once.
pub fn parse_config(text: &str) -> LabResult<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| LabError::Config { line: idx + 1, message };
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-') {
            return Err(err(format!("bad key {key:?}")));
        }
        if key == "config" {
            return Err(err("config files cannot include other config files".into()));
        }
        if value.is_empty() {
            return Err(err(format!("empty value for {key:?}")));
        }
        if out.iter().any(|(k, _)| *k == key) {
            return Err(err(format!("duplicate key {key:?}")));
        }
        out.push((key, value.to_string()));
    }
    Ok(out)
}

/// Turns config entries into flags. `key = true` becomes a bare switch and
/// `key = false` is dropped.
pub fn config_to_args(entries: &[(String, String)]) -> Vec<String> {
    let mut args = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => args.push(format!("--{k}")),
            "false" => {}
            _ => {
                args.push(format!("--{k}"));
                args.push(v.clone());
            }
        }
    }
    args
}

/// Splices `--config FILE` out of `argv` and inserts the file's flags right
/// after the subcommand, so flags given on the command line win.
pub fn expand_config_args(argv: Vec<String>, subcommands: &[&str]) -> LabResult<Vec<String>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(arg) = it.next() {
        if arg == "--config" {
            path = Some(it.next().ok_or_else(|| LabError::Usage("--config needs a path".into()))?);
        } else if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text =
        std::fs::read_to_string(&path).map_err(|e| LabError::Usage(format!("cannot read config {path}: {e}")))?;
    let extra = config_to_args(&parse_config(&text)?);
    let pos = rest
        .iter()
        .skip(1)
        .position(|a| subcommands.contains(&a.as_str()))
        .map(|p| p + 2)
        .ok_or_else(|| LabError::Usage("--config needs a subcommand".into()))?;
    rest.splice(pos..pos, extra);
    Ok(rest)
}

/// Settings for a convergence sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub spec: ClassSpec,
    pub ns: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub epsilons: Vec<f64>,
    pub grid: usize,
    pub good_epsilon: f64,
    pub n_bound: usize,
    pub cache_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> LabResult<()> {
        if self.ns.is_empty() {
            return Err(LabError::Usage("n list is empty".into()));
        }
        if self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Usage(format!("n list {:?} is not strictly ascending", self.ns)));
        }
        if self.ns[0] == 0 {
            return Err(LabError::Usage("n must be positive".into()));
        }
        if self.samples == 0 {
            return Err(LabError::Usage("samples must be at least 1".into()));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return Err(LabError::Usage(format!("epsilon {e} outside (0, 1)")));
        }
        if !(self.good_epsilon > 0.0 && self.good_epsilon < 0.5) {
            return Err(LabError::Usage(format!("goodness epsilon {} outside (0, 0.5)", self.good_epsilon)));
        }
        if self.grid == 0 {
            return Err(LabError::Usage("grid must be positive".into()));
        }
        Ok(())
    }
}
