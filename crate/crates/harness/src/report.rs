//! Check reports and their JSON / CSV renderings.
//!
//! The serialized form is deterministic: records are sorted by check and
//! point index, values are decimal strings, and the wall-clock runtime is
//! kept out of it (it is printed separately by the CLI).

use std::collections::BTreeMap;
use std::time::Duration;

use qfrac::Scalar;
use serde::Serialize;

use crate::error::Result;
use crate::sampler::Rejection;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A component raised an error; `error` names it.
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// `[re, im]` as decimal strings.
pub type Decimal = [String; 2];

pub fn decimal(x: &Scalar) -> Decimal {
    let (re, im) = x.to_decimal(x.decimal_digits());
    [re, im]
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub index: usize,
    pub label: String,
    pub point: BTreeMap<String, Decimal>,
    pub values: BTreeMap<String, Decimal>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    /// `Kind: message` of the component error for [`Status::Error`], or the
    /// reason for a failure that is not a plain residual excess.
    pub error: Option<String>,
    pub diagnostics: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RejectionRecord {
    pub check: String,
    #[serde(flatten)]
    pub rejection: Rejection,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub checks: Vec<String>,
    pub q: Decimal,
    pub precision_bits: u32,
    pub series_tol: f64,
    pub identity_tol: f64,
    pub depth: usize,
    pub seed: u64,
    pub records: Vec<Record>,
    pub rejected: Vec<RejectionRecord>,
    pub summary: Summary,
    #[serde(skip)]
    pub runtime: Duration,
}

impl Report {
    pub fn summarize(records: &[Record]) -> Summary {
        let mut s = Summary {
            total: records.len(),
            ..Summary::default()
        };
        for r in records {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Error => s.errors += 1,
            }
        }
        s
    }

    /// True when there is at least one record and every record passed.
    pub fn all_passed(&self) -> bool {
        self.summary.total > 0 && self.summary.passed == self.summary.total
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per record: check, index, label, status, residual,
    /// tolerance, error.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "check",
            "index",
            "label",
            "status",
            "residual",
            "tolerance",
            "error",
        ])?;
        for r in &self.records {
            w.write_record([
                r.check.clone(),
                r.index.to_string(),
                r.label.clone(),
                r.status.as_str().to_string(),
                r.residual.map(|x| format!("{x:e}")).unwrap_or_default(),
                format!("{:e}", r.tolerance),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
