//! Experiment configuration: command-line flags layered over an optional
//! `key=value` file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use quditstab::FieldSpec;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config file,
/// then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Plain-text `key=value` config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Odd prime local dimension
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Number of qudits
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Number of doped non-Clifford gates
    #[arg(long, global = true)]
    pub t: Option<usize>,
    /// Fidelity parameter of the distinguisher
    #[arg(long, global = true)]
    pub k: Option<f64>,
    /// Failure probability of the distinguisher
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Master seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write to this path instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub p: u32,
    pub n: usize,
    pub t: usize,
    pub k: f64,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { p: 3, n: 2, t: 0, k: 1.0, delta: 0.01, trials: 100, seed: 0, output: None, format: Format::Json }
    }
}

impl ExperimentConfig {
    /// Defaults, then the config file, then flags.
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = &args.config {
            cfg.apply_file(path)?;
        }
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = &args.$field {
                    cfg.$field = v.clone();
                }
            )*};
        }
        take!(p, n, t, k, delta, trials, seed, format);
        if args.output.is_some() {
            cfg.output = args.output.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{}:{}: expected key=value", path.display(), lineno + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            value.parse().map_err(|e| format!("bad value for {key}: {e}"))
        }
        match key {
            "p" => self.p = parse(key, value)?,
            "n" => self.n = parse(key, value)?,
            "t" => self.t = parse(key, value)?,
            "k" => self.k = parse(key, value)?,
            "delta" => self.delta = parse(key, value)?,
            "trials" => self.trials = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            "format" => self.format = parse(key, value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        FieldSpec::new(self.p).map_err(|e| CliError::Config(e.to_string()))?;
        if self.n == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        if !(self.k >= 1.0 && self.k.is_finite()) {
            return Err(CliError::Config("k must be a finite value >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(CliError::Config("delta must lie in (0, 1)".into()));
        }
        Ok(())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec::new(self.p).expect("validated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("quditstab-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# sweep\np = 5\nn=1\nseed=9\nformat=csv\n").unwrap();
        let args = CommonArgs { config: Some(path), n: Some(2), ..CommonArgs::default() };
        let cfg = ExperimentConfig::resolve(&args).unwrap();
        assert_eq!((cfg.p, cfg.n, cfg.seed, cfg.format), (5, 2, 9, Format::Csv));
    }

    #[test]
    fn rejects_bad_input() {
        let bad_p = CommonArgs { p: Some(9), ..CommonArgs::default() };
        assert!(matches!(ExperimentConfig::resolve(&bad_p), Err(CliError::Config(_))));
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.set("colour", "red").is_err());
        assert!(cfg.set("trials", "many").is_err());
    }
}
