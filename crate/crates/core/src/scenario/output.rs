use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ScenarioConfig;
use super::runner::{AlphaCheck, ExitStatus, RunResult, TraceRecord};
use crate::error::{Error, Result};
use crate::verify::ReportSummary;

pub const CSV_HEADER: &str = "scenario,check,xId,t,lhs,rhs,margin,pass";

/// Scientific notation with 17 significant digits.
fn num(v: f64) -> String {
    // Print -0 as 0.
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

/// The report CSV; rows are ordered by `(check, xId, t)`.
pub fn report_csv(result: &RunResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for report in &result.reports {
        for row in &report.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                report.scenario,
                report.check,
                row.x_id,
                num(row.t),
                num(row.lhs),
                num(row.rhs),
                num(row.margin),
                row.pass
            );
        }
    }
    out
}

/// Long format: one line per `(n, t)` with the iterate's components.
pub fn trace_csv(record: &TraceRecord) -> String {
    let tr = &record.trace;
    let dim = tr.iterates.first().map_or(0, |(_, v)| v.dim());
    let mut out = String::from("n,t,successive_error,membership");
    for i in 0..dim {
        let _ = write!(out, ",value_{i}");
    }
    out.push('\n');
    for (idx, (n, value)) in tr.iterates.iter().enumerate() {
        let err = if idx == 0 {
            String::new()
        } else {
            num(tr.successive_errors[idx - 1])
        };
        let comps: String = value.as_slice().iter().map(|c| format!(",{}", num(*c))).collect();
        for (j, t) in tr.t_values.iter().enumerate() {
            let _ = writeln!(out, "{n},{},{err},{}{comps}", num(*t), num(tr.fuzzy_memberships[idx][j]));
        }
    }
    out
}

#[derive(Serialize)]
struct CheckJson<'a> {
    check: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_residual: Option<f64>,
    summary: ReportSummary,
    nonconverged: &'a [usize],
}

#[derive(Serialize)]
struct TraceJson {
    x_id: usize,
    file: String,
    converged: bool,
    n_stop: u32,
    last_error: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    scenario: &'a str,
    seed: u64,
    status: ExitStatus,
    exit_code: u8,
    min_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<AlphaCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axiom_tuples: Option<usize>,
    checks: Vec<CheckJson<'a>>,
    traces: Vec<TraceJson>,
    config: &'a ScenarioConfig,
}

fn trace_file(x_id: usize) -> String {
    format!("trace_{x_id}.csv")
}

pub fn report_json(result: &RunResult) -> String {
    let status = result.status();
    let doc = ReportJson {
        scenario: result.scenario(),
        seed: result.config.seed,
        status,
        exit_code: status.code(),
        min_margin: result.min_margin(),
        alpha: result.alpha,
        axiom_tuples: result.axiom_tuples,
        checks: result
            .reports
            .iter()
            .map(|r| CheckJson {
                check: &r.check,
                constant: r.constant,
                max_residual: r.max_residual,
                summary: r.summary(),
                nonconverged: &r.nonconverged,
            })
            .collect(),
        traces: result
            .traces
            .iter()
            .map(|t| TraceJson {
                x_id: t.x_id,
                file: trace_file(t.x_id),
                converged: t.trace.converged,
                n_stop: t.trace.n_stop,
                last_error: t.trace.last_error(),
            })
            .collect(),
        config: &result.config,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes `report.csv`, `report.json` and one `trace_<xId>.csv` per trace.
pub fn emit_report(result: &RunResult, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut paths = vec![
        write(out_dir.join("report.csv"), &report_csv(result))?,
        write(out_dir.join("report.json"), &report_json(result))?,
    ];
    for record in &result.traces {
        paths.push(write(out_dir.join(trace_file(record.x_id)), &trace_csv(record))?);
    }
    Ok(paths)
}
