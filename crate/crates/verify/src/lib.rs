//! Verification suites over the `heatkernel` engine with deterministic,
//! machine-readable reports.

pub mod config;
pub mod report;
pub mod sample;
pub mod suites;

pub use config::{ConfigError, ScenarioConfig, Suite};
pub use report::{emit, Format, Record, Report, TraceRow};
pub use suites::run_suite;
