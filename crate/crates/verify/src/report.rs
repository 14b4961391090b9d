//! Check records and their bit-stable serializations.

use std::io::{self, Write};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn digest(input: &str) -> String {
    Sha256::digest(input.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub name: String,
    pub inputs_digest: String,
    pub expected: String,
    pub observed: String,
    pub tolerance: String,
    pub pass: bool,
}

/// One `(t, Str[φ̃e^{−tΔ}], tail bound)` sample of a spectral run.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub case: String,
    pub t: f64,
    pub supertrace: f64,
    pub tail_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub config_digest: String,
    pub records: Vec<Record>,
    pub traces: Vec<TraceRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

impl Report {
    /// Records are kept sorted by name.
    pub fn new(suite: &str, seed: u64, config_digest: String, mut records: Vec<Record>, traces: Vec<TraceRow>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        Self { suite: suite.to_string(), seed, config_digest, records, traces }
    }

    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.records.len() - self.passed()
    }

    pub fn pass(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json(&self) -> Value {
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "inputs_digest": r.inputs_digest,
                    "expected": r.expected,
                    "observed": r.observed,
                    "tolerance": r.tolerance,
                    "pass": r.pass,
                })
            })
            .collect();
        let mut summary = Map::new();
        summary.insert("pass".into(), self.pass().into());
        summary.insert("passed".into(), self.passed().into());
        summary.insert("failed".into(), self.failed().into());
        summary.insert("total".into(), self.records.len().into());
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "records": records,
            "summary": summary,
        })
    }

    pub fn summary_line(&self) -> String {
        format!(
            "summary: {} {} passed, {} failed of {}",
            if self.pass() { "PASS" } else { "FAIL" },
            self.passed(),
            self.failed(),
            self.records.len()
        )
    }
}

pub fn emit<W: Write>(report: &Report, format: Format, mut out: W) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report.to_json())?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["name", "inputs_digest", "expected", "observed", "tolerance", "pass"])?;
            for r in &report.records {
                let pass = if r.pass { "true" } else { "false" };
                w.write_record([&r.name, &r.inputs_digest, &r.expected, &r.observed, &r.tolerance, pass])?;
            }
            w.flush()
        }
        Format::Text => {
            writeln!(out, "suite {} seed {} config {}", report.suite, report.seed, report.config_digest)?;
            for r in &report.records {
                writeln!(
                    out,
                    "{} {}  observed={} expected={} tol={}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.observed,
                    r.expected,
                    r.tolerance
                )?;
            }
            writeln!(out, "{}", report.summary_line())
        }
    }
}

pub fn write_traces<W: Write>(rows: &[TraceRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["case", "t", "supertrace", "tail_bound"])?;
    for row in rows {
        w.write_record([row.case.clone(), fmt_f64(row.t), fmt_f64(row.supertrace), fmt_f64(row.tail_bound)])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(name: &str, pass: bool) -> Record {
        Record {
            name: name.into(),
            inputs_digest: digest(name),
            expected: fmt_f64(2.0),
            observed: fmt_f64(2.0),
            tolerance: fmt_f64(1e-8),
            pass,
        }
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -2.0 / 3.0, 1e-300, 6.02e23] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(2.0), "2.0000000000000000e0");
    }

    #[test]
    fn records_sorted_and_summarized() {
        let r = Report::new("x", 1, digest(""), vec![record("b", true), record("a", false)], Vec::new());
        assert_eq!(r.records[0].name, "a");
        assert!(!r.pass());
        let mut text = Vec::new();
        emit(&r, Format::Text, &mut text).unwrap();
        let text = String::from_utf8(text).unwrap();
        assert!(text.ends_with("summary: FAIL 1 passed, 1 failed of 2\n"));
    }

    #[test]
    fn csv_has_one_row_per_record() {
        let r = Report::new("x", 1, digest(""), vec![record("a", true), record("b", true)], Vec::new());
        let mut buf = Vec::new();
        emit(&r, Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    }
}
