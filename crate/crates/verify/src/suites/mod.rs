//! Named verification suites.

mod algebra;
mod duhamel;
mod fixed_point;
mod getzler;
mod spectral;
mod torsion;

use std::panic::{self, AssertUnwindSafe};

use crate::config::{ScenarioConfig, Suite};
use crate::report::{digest, fmt_f64, Record, Report, TraceRow};

/// Result of one check before it is named and digested.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    expected: String,
    observed: String,
    tolerance: String,
    pass: bool,
}

impl Outcome {
    pub(crate) fn close(expected: f64, observed: f64, tol: f64) -> Self {
        Self {
            expected: fmt_f64(expected),
            observed: fmt_f64(observed),
            tolerance: fmt_f64(tol),
            pass: (expected - observed).abs() <= tol,
        }
    }

    /// `observed ≤ bound`.
    pub(crate) fn at_most(observed: f64, bound: f64) -> Self {
        Self {
            expected: "0".into(),
            observed: fmt_f64(observed),
            tolerance: fmt_f64(bound),
            pass: observed <= bound,
        }
    }

    /// Exact comparison; long or multi-line texts are reported by digest.
    pub(crate) fn exact(expected: String, observed: String) -> Self {
        let pass = expected == observed;
        let show = |s: String| {
            if s.len() > 96 || s.contains('\n') {
                format!("sha256:{}", &digest(&s)[..16])
            } else {
                s
            }
        };
        Self { expected: show(expected), observed: show(observed), tolerance: "exact".into(), pass }
    }
}

pub(crate) type CheckResult = Result<Outcome, String>;

/// Collects records for one suite, turning errors and panics into failures.
pub(crate) struct Runner<'a> {
    pub(crate) config: &'a ScenarioConfig,
    prefix: &'static str,
    records: Vec<Record>,
    pub(crate) traces: Vec<TraceRow>,
}

impl<'a> Runner<'a> {
    fn new(config: &'a ScenarioConfig, prefix: &'static str) -> Self {
        Self { config, prefix, records: Vec::new(), traces: Vec::new() }
    }

    pub(crate) fn check(&mut self, name: &str, inputs: &str, f: impl FnOnce() -> CheckResult) {
        let name = format!("{}/{}", self.prefix, name);
        let outcome = match panic::catch_unwind(AssertUnwindSafe(f)) {
            Ok(Ok(outcome)) => outcome,
            Ok(Err(message)) => failure(format!("error: {message}")),
            Err(payload) => {
                let message = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "non-string payload".into());
                failure(format!("panic: {message}"))
            }
        };
        let inputs_digest = digest(&format!("{name}\n{inputs}\n{}", self.config.canonical()));
        self.records.push(Record {
            name,
            inputs_digest,
            expected: outcome.expected,
            observed: outcome.observed,
            tolerance: outcome.tolerance,
            pass: outcome.pass,
        });
    }
}

fn failure(observed: String) -> Outcome {
    Outcome { expected: "-".into(), observed, tolerance: "-".into(), pass: false }
}

pub(crate) fn err_text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Run `suite`, falling back to the suite named in the config.
pub fn run_suite(config: &ScenarioConfig, suite: Suite) -> Report {
    let members: Vec<Suite> = match suite {
        Suite::All => Suite::MEMBERS.to_vec(),
        s => vec![s],
    };
    // checks report panics as records; keep the default hook from printing them
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut records = Vec::new();
    let mut traces = Vec::new();
    for member in members {
        let mut runner = Runner::new(config, member.name());
        match member {
            Suite::Algebra => algebra::run(&mut runner),
            Suite::FixedPoint => fixed_point::run(&mut runner),
            Suite::Getzler => getzler::run(&mut runner),
            Suite::Duhamel => duhamel::run(&mut runner),
            Suite::Spectral => spectral::run(&mut runner),
            Suite::Torsion => torsion::run(&mut runner),
            Suite::All => unreachable!("expanded above"),
        }
        records.append(&mut runner.records);
        traces.append(&mut runner.traces);
    }
    panic::set_hook(hook);
    Report::new(suite.name(), config.seed, digest(&config.canonical()), records, traces)
}

/// Least-squares slope of `log y` against `log x`.
pub(crate) fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
