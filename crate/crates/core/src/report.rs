//! Verdicts, per-identity records and report rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::exact::Rational;

/// Where a check first went wrong. Exponents follow the `u^{-r} v^{-s}`
/// convention, so a polynomial monomial `u^a v^b` is reported as `(-a, -b)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Failure {
    pub instance: Option<String>,
    pub r: Option<i64>,
    pub s: Option<i64>,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub lhs: Option<Rational>,
    pub rhs: Option<Rational>,
    pub detail: String,
}

impl Failure {
    pub fn new(detail: impl Into<String>) -> Self {
        Failure {
            detail: detail.into(),
            ..Failure::default()
        }
    }

    pub fn with_instance(mut self, instance: impl Into<String>) -> Self {
        self.instance = Some(instance.into());
        self
    }

    pub fn at(mut self, r: i64, s: Option<i64>) -> Self {
        self.r = Some(r);
        self.s = s;
        self
    }

    pub fn entry(mut self, row: usize, col: usize, lhs: Rational, rhs: Rational) -> Self {
        self.row = Some(row);
        self.col = Some(col);
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `checked` counts compared coefficients (or matrices, for plain checks).
    Pass {
        checked: usize,
    },
    Fail(Box<Failure>),
    Skip {
        reason: String,
    },
}

impl Verdict {
    pub fn pass(checked: usize) -> Self {
        Verdict::Pass { checked }
    }

    pub fn fail(f: Failure) -> Self {
        Verdict::Fail(Box::new(f))
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass { .. } => "PASS",
            Verdict::Fail(_) => "FAIL",
            Verdict::Skip { .. } => "SKIP",
        }
    }

    pub fn failure(&self) -> Option<&Failure> {
        match self {
            Verdict::Fail(f) => Some(f),
            _ => None,
        }
    }

    /// Fold verdicts of several instances: the first failure wins, passes add up.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut checked = 0;
        for v in verdicts {
            match v {
                Verdict::Pass { checked: c } => checked += c,
                other => return other,
            }
        }
        Verdict::pass(checked)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub id: String,
    pub suite: String,
    pub anchor: String,
    pub params: String,
    pub verdict: Verdict,
    /// Verdict of the independent comparison path, when the identity has one.
    pub oracle: Option<Verdict>,
    pub elapsed_ms: Option<u64>,
}

impl Record {
    pub fn new(id: &str, suite: &str, anchor: &str, params: &str, verdict: Verdict) -> Self {
        Record {
            id: id.to_string(),
            suite: suite.to_string(),
            anchor: anchor.to_string(),
            params: params.to_string(),
            verdict,
            oracle: None,
            elapsed_ms: None,
        }
    }

    pub fn with_oracle(mut self, oracle: Verdict) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn oracle_agrees(&self) -> bool {
        self.oracle
            .as_ref()
            .is_none_or(|o| o.label() == self.verdict.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub records: Vec<Record>,
}

#[derive(Serialize)]
struct FlatRecord<'a> {
    id: &'a str,
    suite: &'a str,
    anchor: &'a str,
    params: &'a str,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    instance: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fail_r: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fail_s: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fail_row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fail_col: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fail_lhs: Option<&'a Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fail_rhs: Option<&'a Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u64>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    records: Vec<FlatRecord<'a>>,
    summary: Summary,
}

impl Report {
    /// Records are kept sorted by id, then parameters, then suite.
    pub fn new(mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| (&a.id, &a.params, &a.suite).cmp(&(&b.id, &b.params, &b.suite)));
        Report { records }
    }

    pub fn summary(&self) -> Summary {
        Summary {
            total: self.records.len(),
            passed: self.records.iter().filter(|r| r.verdict.is_pass()).count(),
            failed: self.records.iter().filter(|r| r.verdict.is_fail()).count(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary().failed == 0
    }

    pub fn find(&self, id: &str) -> impl Iterator<Item = &Record> + '_ {
        let id = id.to_string();
        self.records.iter().filter(move |r| r.id == id)
    }

    pub fn to_json(&self) -> String {
        let records = self
            .records
            .iter()
            .map(|r| {
                let f = r.verdict.failure();
                let detail = match &r.verdict {
                    Verdict::Skip { reason } => Some(reason.as_str()),
                    Verdict::Fail(f) => Some(f.detail.as_str()),
                    Verdict::Pass { .. } => None,
                };
                FlatRecord {
                    id: &r.id,
                    suite: &r.suite,
                    anchor: &r.anchor,
                    params: &r.params,
                    verdict: r.verdict.label(),
                    checked: match r.verdict {
                        Verdict::Pass { checked } => Some(checked),
                        _ => None,
                    },
                    oracle: r.oracle.as_ref().map(Verdict::label),
                    instance: f
                        .and_then(|f| f.instance.as_deref())
                        .filter(|i| !i.is_empty()),
                    fail_r: f.and_then(|f| f.r),
                    fail_s: f.and_then(|f| f.s),
                    fail_row: f.and_then(|f| f.row),
                    fail_col: f.and_then(|f| f.col),
                    fail_lhs: f.and_then(|f| f.lhs.as_ref()),
                    fail_rhs: f.and_then(|f| f.rhs.as_ref()),
                    detail: detail.filter(|d| !d.is_empty()),
                    elapsed_ms: r.elapsed_ms,
                }
            })
            .collect();
        let doc = JsonReport {
            records,
            summary: self.summary(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(
                out,
                "{:<4}  {:<28} [{}] {}",
                r.verdict.label(),
                r.id,
                r.suite,
                r.params
            );
            match &r.verdict {
                Verdict::Pass { checked } => {
                    let _ = write!(out, "  checked={checked}");
                }
                Verdict::Skip { reason } => {
                    let _ = write!(out, "  skipped: {reason}");
                }
                Verdict::Fail(f) => {
                    if let Some(i) = f.instance.as_deref().filter(|i| !i.is_empty()) {
                        let _ = write!(out, "  instance {i}");
                    }
                    match (f.r, f.s) {
                        (Some(r), Some(s)) => {
                            let _ = write!(out, "  at u^{} v^{}", -r, -s);
                        }
                        (Some(r), None) => {
                            let _ = write!(out, "  at u^{}", -r);
                        }
                        _ => {}
                    }
                    if let (Some(row), Some(col), Some(l), Some(rh)) =
                        (f.row, f.col, &f.lhs, &f.rhs)
                    {
                        let _ = write!(out, "  entry ({row},{col}) lhs={l} rhs={rh}");
                    }
                    if !f.detail.is_empty() {
                        let _ = write!(out, "  {}", f.detail);
                    }
                }
            }
            if let Some(o) = &r.oracle {
                let _ = write!(out, "  oracle={}", o.label());
            }
            if let Some(ms) = r.elapsed_ms {
                let _ = write!(out, "  {ms}ms");
            }
            out.push('\n');
        }
        let s = self.summary();
        let _ = writeln!(
            out,
            "total={} passed={} failed={}",
            s.total, s.passed, s.failed
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_keeps_first_failure() {
        let v = Verdict::combine([
            Verdict::pass(3),
            Verdict::fail(Failure::new("a")),
            Verdict::fail(Failure::new("b")),
        ]);
        assert_eq!(v.failure().unwrap().detail, "a");
        assert_eq!(
            Verdict::combine([Verdict::pass(2), Verdict::pass(5)]),
            Verdict::pass(7)
        );
    }

    #[test]
    fn json_is_flat_and_sorted() {
        let fail = Failure::new("")
            .with_instance("(0,1)")
            .at(3, Some(1))
            .entry(0, 2, Rational::new(1, 2), Rational::zero());
        let report = Report::new(vec![
            Record::new("b", "x", "", "K=8", Verdict::fail(fail)),
            Record::new("a", "x", "", "K=8", Verdict::pass(4)),
        ]);
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["records"][0]["id"], "a");
        assert_eq!(v["records"][1]["fail_lhs"], "1/2");
        assert_eq!(v["records"][1]["fail_r"], 3);
        assert_eq!(v["summary"]["failed"], 1);
        for rec in v["records"].as_array().unwrap() {
            for (_, val) in rec.as_object().unwrap() {
                assert!(!val.is_object() && !val.is_array());
            }
        }
    }
}
