use crate::error::{Error, Result};
use crate::moments::Residual;
use serde::Serialize;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Argument(format!("unknown format {other:?}"))),
        }
    }
}

/// What a check must show to pass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// Exact checks vanish literally; float checks stay within tolerance.
    Zero,
    /// The quantity must be certified nonzero (exactly, or above the bound).
    Nonzero { threshold: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check_id: String,
    pub paper_anchor: String,
    /// Largest residual, or the witness magnitude for nonzero checks.
    pub residual: f64,
    /// Exact-zero flag; `None` when the quantity was only known in floats.
    pub exact: Option<bool>,
    pub pass: bool,
    pub expect: Expectation,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckRecord {
    pub fn zero(suite: &str, id: &str, anchor: &str, r: Residual, tol: f64) -> Self {
        let pass = match r.exact_zero {
            Some(z) => z,
            None => r.max_abs <= tol,
        };
        CheckRecord {
            suite: suite.into(),
            check_id: id.into(),
            paper_anchor: anchor.into(),
            residual: r.max_abs,
            exact: r.exact_zero,
            pass,
            expect: Expectation::Zero,
            detail: String::new(),
        }
    }

    /// `r.exact_zero == Some(false)` certifies nonzero outright; otherwise
    /// the magnitude must exceed `threshold`.
    pub fn nonzero(suite: &str, id: &str, anchor: &str, r: Residual, threshold: f64) -> Self {
        let pass = match r.exact_zero {
            Some(z) => !z,
            None => r.max_abs > threshold,
        };
        CheckRecord {
            suite: suite.into(),
            check_id: id.into(),
            paper_anchor: anchor.into(),
            residual: r.max_abs,
            exact: r.exact_zero,
            pass,
            expect: Expectation::Nonzero { threshold },
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl SuiteResult {
    pub fn new(suite: &str, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        let pass = records.iter().all(|r| r.pass);
        SuiteResult {
            suite: suite.into(),
            records,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    pass: bool,
    records: Vec<&'a CheckRecord>,
}

pub fn render_report(results: &[SuiteResult], format: Format) -> Result<String> {
    let records: Vec<&CheckRecord> = results.iter().flat_map(|s| &s.records).collect();
    let pass = results.iter().all(|s| s.pass);
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&JsonReport { pass, records })
                .map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "suite",
                "check_id",
                "paper_anchor",
                "residual",
                "exact",
                "pass",
                "detail",
            ])
            .map_err(|e| Error::Io(e.to_string()))?;
            for r in records {
                w.write_record([
                    r.suite.as_str(),
                    r.check_id.as_str(),
                    r.paper_anchor.as_str(),
                    &format!("{:e}", r.residual),
                    exact_label(r.exact),
                    if r.pass { "true" } else { "false" },
                    r.detail.as_str(),
                ])
                .map_err(|e| Error::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
        }
        Format::Text => {
            let mut out = String::new();
            for s in results {
                let failed = s.failures().count();
                let _ = writeln!(
                    out,
                    "suite {}: {} ({} checks, {} failed)",
                    s.suite,
                    if s.pass { "PASS" } else { "FAIL" },
                    s.records.len(),
                    failed
                );
                for r in &s.records {
                    let _ = write!(
                        out,
                        "  {} {:<40} {:>12.3e} {:<6} {}",
                        if r.pass { "ok  " } else { "FAIL" },
                        r.check_id,
                        r.residual,
                        exact_label(r.exact),
                        r.paper_anchor
                    );
                    if !r.detail.is_empty() {
                        let _ = write!(out, "  ({})", r.detail);
                    }
                    out.push('\n');
                }
            }
            let _ = writeln!(out, "overall: {}", if pass { "PASS" } else { "FAIL" });
            Ok(out)
        }
    }
}

fn exact_label(e: Option<bool>) -> &'static str {
    match e {
        Some(true) => "exact0",
        Some(false) => "exact!0",
        None => "float",
    }
}
