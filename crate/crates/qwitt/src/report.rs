//! Check records shared by the verification suites and the CLI.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// One verified statement with its parameters. A failure always carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    /// Set by precision-dependent checks: whether the verdict survived the refined re-run.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stabilized: Option<bool>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            witness: None,
            stabilized: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn stabilized(mut self, stable: bool) -> Self {
        self.stabilized = Some(stable);
        self
    }

    pub fn pass(mut self) -> Self {
        self.status = Status::Pass;
        self.witness = None;
        self
    }

    pub fn fail(mut self, witness: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness.into());
        self
    }

    pub fn inconclusive(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Inconclusive;
        self.witness = Some(note.into());
        self
    }

    /// Pass if `ok`, otherwise fail with the lazily built witness.
    pub fn verdict(self, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            self.pass()
        } else {
            self.fail(witness())
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Stable sort key: name, then parameters.
    pub fn key(&self) -> String {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}[{}]", self.name, ps.join(","))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

/// A check record tagged with the suite that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub suite: String,
    pub key: String,
    #[serde(flatten)]
    pub check: CheckRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

impl ReportRecord {
    pub fn new(suite: &str, check: CheckRecord, runtime_ms: Option<u64>) -> Self {
        ReportRecord { suite: suite.to_string(), key: check.key(), check, runtime_ms }
    }
}

/// The output of a verification run: records sorted by suite and key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: serde_json::Value,
    pub records: Vec<ReportRecord>,
    pub summary: Summary,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("fail record without witness: {0}")]
    MissingWitness(String),
}

impl Report {
    pub fn new(config: serde_json::Value, mut records: Vec<ReportRecord>) -> Self {
        records.sort_by(|a, b| (&a.suite, &a.key).cmp(&(&b.suite, &b.key)));
        let mut summary = Summary::default();
        for r in &records {
            match r.check.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Inconclusive => summary.inconclusive += 1,
            }
        }
        Report { tool: "qwitt".into(), version: env!("CARGO_PKG_VERSION").into(), config, records, summary }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Parses a JSON report and checks that every failure carries a witness.
    pub fn parse(text: &str) -> Result<Self, ReportError> {
        let r: Report = serde_json::from_str(text)?;
        if let Some(bad) = r.records.iter().find(|x| x.check.status == Status::Fail && x.check.witness.is_none()) {
            return Err(ReportError::MissingWitness(bad.key.clone()));
        }
        Ok(r)
    }

    /// One row per record: `suite,name,params,status,witness,stabilized,runtime_ms`, with
    /// params as `k=v` pairs joined by `;`.
    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "name", "params", "status", "witness", "stabilized", "runtime_ms"])?;
        for r in &self.records {
            let params: Vec<String> = r.check.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            w.write_record([
                r.suite.clone(),
                r.check.name.clone(),
                params.join(";"),
                r.check.status.to_string(),
                r.check.witness.clone().unwrap_or_default(),
                r.check.stabilized.map(|b| b.to_string()).unwrap_or_default(),
                r.runtime_ms.map(|t| t.to_string()).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{:<12} {:<5} {}", r.check.status, r.suite, r.key));
            if let Some(w) = &r.check.witness {
                out.push_str(&format!("  -- {w}"));
            }
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!("{} pass, {} fail, {} inconclusive\n", s.pass, s.fail, s.inconclusive));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_order() {
        let recs = vec![
            ReportRecord::new("b", CheckRecord::new("x").param("m", 2).fail("w"), None),
            ReportRecord::new("a", CheckRecord::new("y").inconclusive("n").stabilized(false), Some(3)),
            ReportRecord::new("a", CheckRecord::new("x").pass(), None),
        ];
        let r = Report::new(serde_json::json!({"seed": 1}), recs);
        assert_eq!(r.records[0].key, "x[]");
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, inconclusive: 1 });
        assert_eq!(Report::parse(&r.to_json()).unwrap(), r);
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.contains("b,x,m=2,fail,w,,"));
        let mut broken = serde_json::to_value(&r).unwrap();
        let fail = broken["records"].as_array_mut().unwrap().iter_mut().find(|x| x["status"] == "fail").unwrap();
        fail.as_object_mut().unwrap().remove("witness");
        assert!(matches!(Report::parse(&broken.to_string()), Err(ReportError::MissingWitness(_))));
    }
}
