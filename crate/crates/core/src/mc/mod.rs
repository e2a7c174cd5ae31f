//! Seeded Monte Carlo experiments on H_n.

mod harness;
mod stats;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectral::TestFunction;

pub use harness::{
    convex_concentration_experiment, evaluate_trial, run_experiment, tail_mass_experiment, trial_seed,
    ConcentrationReport, ScaledPoint, TrialRecord,
};
pub use stats::{
    estimate, estimate_group, normality_diagnostics, qq_points, scale_factor, EstimateReport, NeumaierSum,
    Normality,
};

/// A single n or an increasing grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NSpec {
    One(usize),
    Many(Vec<usize>),
}

impl NSpec {
    pub fn values(&self) -> Vec<usize> {
        match self {
            NSpec::One(n) => vec![*n],
            NSpec::Many(ns) => ns.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Schedule {
    /// np(1−p) = c·(log n)⁵, taking the root p ≤ 1/2.
    #[serde(rename = "c_log4", alias = "c/log4")]
    CLog4,
    #[serde(rename = "constant")]
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PSpec {
    Fixed(f64),
    Schedule { schedule: Schedule, c: f64 },
}

impl PSpec {
    pub fn at(&self, n: usize) -> Result<f64> {
        let p = match *self {
            PSpec::Fixed(p) | PSpec::Schedule { schedule: Schedule::Constant, c: p } => p,
            PSpec::Schedule { schedule: Schedule::CLog4, c } => {
                let t = c * (n as f64).ln().powi(5) / n as f64;
                if !(t > 0.0 && t <= 0.25) {
                    return Err(Error::invalid(format!(
                        "c/log4 schedule with c = {c} has no solution at n = {n}"
                    )));
                }
                (1.0 - (1.0 - 4.0 * t).sqrt()) / 2.0
            }
        };
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid(format!("p = {p} at n = {n} must lie strictly inside (0, 1)")));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub n: NSpec,
    pub p: PSpec,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(serialize_with = "ser_stats", deserialize_with = "de_stats")]
    pub statistics: Vec<TestFunction>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Thread count; results do not depend on it.
    #[serde(default)]
    pub workers: Option<usize>,
}

fn ser_stats<S: Serializer>(stats: &[TestFunction], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(stats.iter().map(|f| f.to_string()))
}

fn de_stats<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<TestFunction>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Item {
        Num(f64),
        Str(String),
    }
    Vec::<Item>::deserialize(d)?
        .into_iter()
        .map(|item| match item {
            Item::Num(c) => Ok(TestFunction::Const(c)),
            Item::Str(s) => s.parse().map_err(serde::de::Error::custom),
        })
        .collect()
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::invalid("d must be at least 1"));
        }
        if self.trials < 2 {
            return Err(Error::invalid("trials must be at least 2"));
        }
        let ns = self.n.values();
        if ns.is_empty() {
            return Err(Error::invalid("n grid is empty"));
        }
        for &n in &ns {
            if n <= self.d {
                return Err(Error::invalid(format!("need n > d, got n = {n}, d = {}", self.d)));
            }
            self.p.at(n)?;
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("workers must be positive"));
        }
        Ok(())
    }

    /// TOML when the extension is `.toml`, JSON otherwise.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let config: ExperimentConfig = if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text)?
        } else {
            serde_json::from_str(&text)?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn statistic_names(&self) -> Vec<String> {
        self.statistics.iter().map(|f| f.to_string()).collect()
    }
}

/// Writes `records.csv`, `report.json` and `qq.csv` into `dir`.
pub fn write_outputs(
    dir: &Path,
    config: &ExperimentConfig,
    records: &[TrialRecord],
    reports: &[EstimateReport],
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let names = config.statistic_names();

    let mut csv = String::from("trial_index,seed,n");
    for name in &names {
        csv.push(',');
        csv.push_str(&csv_field(name));
    }
    csv.push('\n');
    for r in records {
        csv.push_str(&format!("{},{},{}", r.trial_index, r.seed, r.n));
        for v in &r.values {
            csv.push_str(&format!(",{v}"));
        }
        csv.push('\n');
    }
    fs::write(dir.join("records.csv"), csv)?;

    let report = serde_json::json!({
        "schema": crate::SCHEMA,
        "config": config,
        "reports": reports,
    });
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;

    let mut qq = String::from("n,statistic,rank,standardized,normal_quantile\n");
    for report in reports {
        let group: Vec<&TrialRecord> = records.iter().filter(|r| r.n == report.n).collect();
        for (j, name) in names.iter().enumerate() {
            let values: Vec<f64> = group.iter().map(|r| r.values[j]).collect();
            if let Some(points) = qq_points(&values) {
                for (i, (z, q)) in points.iter().enumerate() {
                    qq.push_str(&format!("{},{},{},{z},{q}\n", report.n, csv_field(name), i + 1));
                }
            }
        }
    }
    fs::write(dir.join("qq.csv"), qq)?;
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
