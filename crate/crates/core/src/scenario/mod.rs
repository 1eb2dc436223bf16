//! Declarative scenarios: TOML configs, seeded sampling, the check runner and
//! deterministic CSV/JSON output.

mod builtins;
mod config;
mod output;
mod runner;
pub mod sampling;

pub use builtins::{describe, list_builtins, load_builtin};
pub use config::{CheckId, ClassicalConfig, FuzzyKindId, FuzzyNormConfig, Scenario, ScenarioConfig};
pub use output::{emit_report, report_csv, report_json, trace_csv, CSV_HEADER};
pub use runner::{
    run, run_scenario, run_with_jobs, AlphaCheck, ExitStatus, RunResult, TraceRecord,
    ALPHA_TOLERANCE,
};
