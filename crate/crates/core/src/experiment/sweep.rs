//! File-driven batches of tau curves and critical-M searches.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    critical_m, tau_curve, write_critical_m_csv, write_tau_curve_csv, CriticalM, Population, RunOptions, TauCurve,
    DEFAULT_TAU_POINTS,
};
use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Job {
    TauCurve,
    CriticalM,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taus: Option<Vec<f64>>,
    #[serde(rename = "M_list", default, skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<usize>>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub out_dir: PathBuf,
    /// Defaults to a tau curve only.
    #[serde(default = "default_jobs")]
    pub jobs: Vec<Job>,
}

fn default_jobs() -> Vec<Job> {
    vec![Job::TauCurve]
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config { location: format!("field `{}`", field.into()), message: message.into() }
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Config {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; a relative `out_dir` is taken relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut config = Self::parse(&text)?;
        if config.out_dir.is_relative() {
            if let Some(parent) = path.parent() {
                config.out_dir = parent.join(&config.out_dir);
            }
        }
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(field_error("sizes", "at least one grid size is required"));
        }
        for (i, &n) in self.sizes.iter().enumerate() {
            GridSpec::new(n).map_err(|e| field_error(format!("sizes[{i}]"), e.to_string()))?;
        }
        if self.taus.is_some() && self.m_list.is_some() {
            return Err(field_error("taus", "`taus` and `M_list` are mutually exclusive"));
        }
        if let Some(taus) = &self.taus {
            for (i, &tau) in taus.iter().enumerate() {
                if !(tau > 0.0 && tau <= 1.0) {
                    return Err(field_error(format!("taus[{i}]"), format!("{tau} is outside (0, 1]")));
                }
            }
        }
        if let Some(ms) = &self.m_list {
            for (i, &m) in ms.iter().enumerate() {
                for &n in &self.sizes {
                    if m == 0 || m > n * n {
                        return Err(field_error(format!("M_list[{i}]"), format!("{m} is outside [1, {}]", n * n)));
                    }
                }
            }
        }
        if self.trials == 0 {
            return Err(field_error("trials", "must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(field_error("threads", "must be at least 1"));
        }
        if self.jobs.is_empty() {
            return Err(field_error("jobs", "at least one job is required"));
        }
        Ok(())
    }

    pub fn population(&self) -> Population {
        match (&self.taus, &self.m_list) {
            (Some(t), _) => Population::Taus(t.clone()),
            (None, Some(m)) => Population::Counts(m.clone()),
            (None, None) => Population::LogSpaced(DEFAULT_TAU_POINTS),
        }
    }
}

/// Inputs and defaults that shaped a sweep, written next to its CSV files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub version: String,
    pub sizes: Vec<usize>,
    pub population: Population,
    pub marked_counts: Vec<Vec<usize>>,
    pub trials: usize,
    pub seed: u64,
    pub jobs: Vec<Job>,
    pub t_opt_rule: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub tau_curve: Option<TauCurve>,
    pub critical: Vec<CriticalM>,
    pub files: Vec<PathBuf>,
}

/// Runs every job and writes `tau_curve.csv`, `critical_m.csv` and `metadata.json` into `out_dir`.
///
/// `threads` overrides the config's worker count. Output bytes do not depend on it.
pub fn run_sweep(config: &SweepConfig, threads: Option<usize>) -> Result<SweepOutcome> {
    let opts = RunOptions { threads: threads.or(config.threads), work_budget: None };
    let population = config.population();
    fs::create_dir_all(&config.out_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", config.out_dir.display())))?;
    let mut outcome = SweepOutcome { tau_curve: None, critical: Vec::new(), files: Vec::new() };

    if config.jobs.contains(&Job::TauCurve) {
        let curve = tau_curve(&config.sizes, &population, config.trials, config.seed, opts)?;
        let path = config.out_dir.join("tau_curve.csv");
        let mut buf = Vec::new();
        write_tau_curve_csv(&curve, &mut buf)?;
        write_file(&path, &buf)?;
        outcome.files.push(path);
        outcome.tau_curve = Some(curve);
    }
    if config.jobs.contains(&Job::CriticalM) {
        for &n in &config.sizes {
            outcome.critical.push(critical_m(GridSpec::new(n)?, config.trials, config.seed, opts)?);
        }
        let path = config.out_dir.join("critical_m.csv");
        let mut buf = Vec::new();
        write_critical_m_csv(&outcome.critical, &mut buf)?;
        write_file(&path, &buf)?;
        outcome.files.push(path);
    }

    let marked_counts = config
        .sizes
        .iter()
        .map(|&n| population.counts(GridSpec::new(n)?))
        .collect::<Result<Vec<_>>>()?;
    let meta = SweepMetadata {
        version: env!("CARGO_PKG_VERSION").to_string(),
        sizes: config.sizes.clone(),
        population,
        marked_counts,
        trials: config.trials,
        seed: config.seed,
        jobs: config.jobs.clone(),
        t_opt_rule: "floor(sqrt(pi N ln N) / 4)".into(),
    };
    let path = config.out_dir.join("metadata.json");
    let mut text = serde_json::to_string_pretty(&meta).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    write_file(&path, text.as_bytes())?;
    outcome.files.push(path);
    Ok(outcome)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_field_reports_position() {
        let err = SweepConfig::parse("{\n  \"sizes\": [8],\n  \"trails\": 3\n}").unwrap_err();
        match err {
            Error::Config { location, message } => {
                assert_eq!(location, "line 3, column 10");
                assert!(message.contains("trails"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_size_names_field() {
        let text = r#"{"sizes": [8, 7], "trials": 2, "seed": 1, "out_dir": "x"}"#;
        match SweepConfig::parse(text).unwrap_err() {
            Error::Config { location, .. } => assert_eq!(location, "field `sizes[1]`"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn taus_and_counts_exclusive() {
        let text = r#"{"sizes": [8], "taus": [0.5], "M_list": [2], "trials": 2, "seed": 1, "out_dir": "x"}"#;
        assert!(SweepConfig::parse(text).is_err());
    }

    #[test]
    fn defaults() {
        let c = SweepConfig::parse(r#"{"sizes": [8], "trials": 2, "seed": 1, "out_dir": "x"}"#).unwrap();
        assert_eq!(c.jobs, vec![Job::TauCurve]);
        assert_eq!(c.population(), Population::LogSpaced(DEFAULT_TAU_POINTS));
    }
}
