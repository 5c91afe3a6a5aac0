//! Seeded Monte Carlo and deterministic verification drivers.
//!
//! Every driver returns an [`ExperimentReport`]: a config echo, the seed,
//! one row per trial (or per grid point), and summary statistics with named
//! pass/fail checks. Trials run in parallel on counter-based substreams and
//! are reduced in trial order, so the report does not depend on the number
//! of worker threads.

mod asymptotics;
mod concentration;
mod counterexample;
mod equidistribution;
mod gn;
mod hole;
mod khinchin;
mod kahane;
mod lacunary;
mod log_moments;
mod real_zeros;
mod turan;

pub use asymptotics::{exp_coeff_asymptotics, AsymptoticsOptions};
pub use concentration::{exp_zero_concentration, ConcentrationOptions};
pub use counterexample::{exp_counterexample_r0, CounterexampleOptions};
pub use equidistribution::{exp_equidistribution, EquidistributionOptions};
pub use gn::{exp_gn_sharpness, gn_l2_exact};
pub use hole::{exp_hole_mc, exp_omega_soundness, HoleOptions, HoleReference, OmegaOptions};
pub use kahane::{exp_kahane_range, KahaneOptions};
pub use khinchin::{exp_khinchin, KhinchinOptions};
pub use lacunary::{exp_lacunary_discrepancy, lacunary_delta, LacunaryOptions};
pub use log_moments::{exp_log_moments, flat_profile, LogMomentOptions};
pub use real_zeros::{exp_real_zeros, RealZerosOptions};
pub use turan::{exp_turan_diagnostic, TuranOptions};

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::growth::CoefficientSequence;
use crate::sampling::{sample, EnsembleSpec, SampleOptions, SeriesSample};
use crate::zeros::{find_zeros_disk, ZeroSet};

/// One named acceptance check inside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub config: BTreeMap<String, Value>,
    pub config_hash: String,
    pub seed: u64,
    pub columns: Vec<String>,
    #[serde(skip_serializing)]
    #[serde(default)]
    pub rows: Vec<Vec<Value>>,
    pub row_count: usize,
    pub summary: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    /// Exploratory runs carry no verdict.
    pub exploratory: bool,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(name: &str, seed: u64, config: BTreeMap<String, Value>, columns: &[&str]) -> Self {
        let config_hash = config_hash(&config);
        Self {
            name: name.to_string(),
            config,
            config_hash,
            seed,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            row_count: 0,
            summary: BTreeMap::new(),
            checks: Vec::new(),
            exploratory: false,
            notes: Vec::new(),
        }
    }

    /// Adds `key` to the config echo and refreshes the hash.
    pub fn extend_config(&mut self, key: &str, value: Value) {
        self.config.insert(key.to_string(), value);
        self.config_hash = config_hash(&self.config);
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self.row_count = self.rows.len();
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.to_string(), serde_json::to_value(value).expect("summary value serializes"));
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// `None` for exploratory runs, otherwise whether every check passed.
    pub fn passed(&self) -> Option<bool> {
        if self.exploratory {
            None
        } else {
            Some(self.checks.iter().all(|c| c.passed))
        }
    }

    pub fn get_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary_f64(&self, key: &str) -> Option<f64> {
        self.summary.get(key).and_then(Value::as_f64)
    }

    /// Column `name` of every row as `f64` (non-numeric cells skipped).
    pub fn column_f64(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.columns.iter().position(|c| c == name) else {
            return Vec::new();
        };
        self.rows.iter().filter_map(|r| r[i].as_f64()).collect()
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = json!(self.passed());
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    /// CSV text: a `#` comment line with name, seed and config hash, the
    /// header, then the rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory csv");
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).expect("in-memory csv");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv");
        format!("# {} seed={} config_hash={}\n{body}", self.name, self.seed, self.config_hash)
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir).map_err(|e| Error::NumericalFailure(format!("cannot create {}: {e}", dir.display())))?;
        let csv_path = dir.join(format!("{stem}.csv"));
        let json_path = dir.join(format!("{stem}.json"));
        write_file(&csv_path, &self.to_csv())?;
        write_file(&json_path, &self.to_json())?;
        Ok((csv_path, json_path))
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::NumericalFailure(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(|e| Error::NumericalFailure(format!("cannot write {}: {e}", path.display())))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// First 16 hex digits of the SHA-256 of the canonical (key-sorted) JSON config.
pub fn config_hash(config: &BTreeMap<String, Value>) -> String {
    let text = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Runs `f(trial)` for every trial in parallel and returns results in trial order.
pub(crate) fn par_trials<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

/// JSON value of a float that may be infinite or NaN (stored as a string).
pub(crate) fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

/// Builds a config echo from `(key, value)` pairs.
pub(crate) fn config_of(pairs: Vec<(&str, Value)>) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Counts numerical failures; the run aborts once they exceed 1% of trials.
pub(crate) fn failure_budget(report: &mut ExperimentReport, failures: &[String], trials: u64) -> Result<()> {
    report.set("numerical_failures", failures.len());
    if !failures.is_empty() {
        report.note(format!("first numerical failure: {}", failures[0]));
    }
    if failures.len() as f64 > 0.01 * trials as f64 {
        return Err(Error::NumericalFailure(format!(
            "{} of {trials} trials failed numerically; first: {}",
            failures.len(),
            failures[0]
        )));
    }
    Ok(())
}

/// Draws trial `trial` and finds its zeros in `|z| ≤ r_max`, tightening the
/// tail tolerance when the Rouché margin cannot be verified.
pub(crate) fn sample_and_find(
    seq: &CoefficientSequence,
    ensemble: &EnsembleSpec,
    trial: u64,
    opts: &SampleOptions,
) -> Result<(SeriesSample, ZeroSet)> {
    let mut opts = *opts;
    let mut last = None;
    for _ in 0..3 {
        let s = sample(seq, ensemble, trial, &opts)?;
        match find_zeros_disk(&s, opts.r_max) {
            Ok(zs) => return Ok((s, zs)),
            Err(e @ Error::RoucheMarginUnverifiable { .. }) => {
                last = Some(e);
                opts.tail_tol *= 1e-6;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("loop ran"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trip() {
        let cfg = config_of(vec![("seq", json!("gef")), ("r", json!(2.0))]);
        let mut r = ExperimentReport::new("demo", 7, cfg.clone(), &["trial", "value"]);
        r.push_row(vec![json!(0), json!(1.5)]);
        r.push_row(vec![json!(1), num(f64::INFINITY)]);
        r.check("ok", true, "");
        let csv = r.to_csv();
        assert!(csv.starts_with("# demo seed=7 config_hash="));
        assert!(csv.contains("trial,value\n0,1.5\n1,inf\n"));
        assert_eq!(r.passed(), Some(true));
        assert_eq!(config_hash(&cfg), r.config_hash);
        assert_eq!(r.config_hash.len(), 16);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["row_count"], json!(2));
        assert_eq!(v["passed"], json!(true));
    }

    #[test]
    fn par_trials_preserves_order() {
        let v = par_trials(100, |t| t * t);
        assert_eq!(v, (0..100).map(|t| t * t).collect::<Vec<_>>());
    }
}
