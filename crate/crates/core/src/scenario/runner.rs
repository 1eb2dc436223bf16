use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{config_err, CheckId, Scenario, ScenarioConfig};
use super::sampling::{level_pairs, sample_points, STREAM_AXIOM_Y, STREAM_AXIOM_Z, STREAM_PARTNERS, STREAM_SAMPLES};
use crate::catalog::{estimate_alpha, AlphaEstimate, ControlFunction, FunctionSpec, PexiderTriple};
use crate::error::{Error, Result};
use crate::fuzzy::{check_axioms, AxiomSettings, FuzzyNorm};
use crate::hyers::{run_trace, HyersTrace, IterationKind};
use crate::space::Vector;
use crate::verify::{
    check_control_bounded, check_q_almost, verify_classical, verify_decomposition,
    verify_even_pexider, verify_odd_pexider, verify_quadratic_stability, ReportRow,
    StabilityReport, Sweep,
};

/// Scalars probed for homogeneity in the axiom check.
const AXIOM_SCALARS: [f64; 6] = [-3.0, -1.0, -0.5, 0.25, 2.0, 10.0];

/// Agreement required between the declared and estimated α.
pub const ALPHA_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitStatus {
    Success,
    InequalityFailure,
    ConvergenceFailure,
    ConfigError,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::InequalityFailure => 1,
            ExitStatus::ConvergenceFailure => 2,
            ExitStatus::ConfigError => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaCheck {
    pub declared: f64,
    pub estimate: AlphaEstimate,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub x_id: usize,
    pub trace: HyersTrace,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub config: ScenarioConfig,
    /// Sorted by check id.
    pub reports: Vec<StabilityReport>,
    pub traces: Vec<TraceRecord>,
    pub alpha: Option<AlphaCheck>,
    pub axiom_tuples: Option<usize>,
}

impl RunResult {
    pub fn scenario(&self) -> &str {
        &self.config.name
    }

    pub fn report(&self, check: &str) -> Option<&StabilityReport> {
        self.reports.iter().find(|r| r.check == check)
    }

    /// Convergence failures take precedence over inequality failures.
    pub fn status(&self) -> ExitStatus {
        if self.reports.iter().any(|r| !r.converged()) {
            ExitStatus::ConvergenceFailure
        } else if self.reports.iter().any(|r| !r.passed()) || self.alpha.is_some_and(|a| !a.passed) {
            ExitStatus::InequalityFailure
        } else {
            ExitStatus::Success
        }
    }

    pub fn min_margin(&self) -> Option<f64> {
        self.reports
            .iter()
            .filter_map(|r| r.summary().min_margin)
            .reduce(f64::min)
    }
}

/// Loads a config file and runs it on the global thread pool.
pub fn run_scenario(path: &Path) -> Result<RunResult> {
    run(&Scenario::from_path(path)?)
}

/// Runs on a dedicated pool of `jobs` threads; output does not depend on it.
pub fn run_with_jobs(scenario: &Scenario, jobs: Option<usize>) -> Result<RunResult> {
    match jobs {
        None => run(scenario),
        Some(0) => Err(config_err("--jobs must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| config_err(format!("thread pool: {e}")))?
            .install(|| run(scenario)),
    }
}

pub fn run(scenario: &Scenario) -> Result<RunResult> {
    let c = &scenario.config;
    let samples = sample_points(c.seed, STREAM_SAMPLES, c.sample_count, c.dim, c.sample_radius);
    let partners = sample_points(c.seed, STREAM_PARTNERS, c.sample_count, c.dim, c.sample_radius);
    let sweep = Sweep::new(samples, partners, c.t_grid.clone(), scenario.options)?;
    let mut result = RunResult {
        config: c.clone(),
        reports: Vec::new(),
        traces: Vec::new(),
        alpha: None,
        axiom_tuples: None,
    };
    for &check in &c.checks {
        match check {
            CheckId::Axioms => {
                let (reports, tuples) = axiom_reports(scenario, &sweep)?;
                result.reports.extend(reports);
                result.axiom_tuples = Some(tuples);
            }
            CheckId::QAlmost => {
                let levels = level_pairs(c.seed, c.sample_count, &c.t_grid);
                let q = c.q.expect("validated");
                result.reports.push(check_q_almost(
                    function(scenario)?,
                    &scenario.fn_x,
                    &scenario.fn_y,
                    q,
                    &sweep,
                    &levels,
                )?);
            }
            CheckId::ControlBounded => {
                result.reports.push(check_control_bounded(
                    &triple(scenario)?,
                    control(scenario)?,
                    &scenario.fn_y,
                    fn_z(scenario)?,
                    &sweep,
                )?);
            }
            CheckId::QuadraticBound => {
                let q = c.q.expect("validated");
                result.reports.extend(verify_quadratic_stability(
                    function(scenario)?,
                    &scenario.fn_x,
                    &scenario.fn_y,
                    q,
                    &sweep,
                )?);
            }
            CheckId::Classical => {
                let cl = c.classical.expect("validated");
                result.reports.extend(verify_classical(
                    function(scenario)?,
                    cl.p,
                    cl.c,
                    scenario.fn_x.base(),
                    scenario.fn_y.base(),
                    &sweep,
                )?);
            }
            CheckId::OddPexider => result.reports.extend(verify_odd_pexider(
                &triple(scenario)?,
                control(scenario)?,
                &scenario.fn_y,
                fn_z(scenario)?,
                &sweep,
            )?),
            CheckId::EvenPexider => result.reports.extend(verify_even_pexider(
                &triple(scenario)?,
                control(scenario)?,
                &scenario.fn_y,
                fn_z(scenario)?,
                &sweep,
            )?),
            CheckId::Decomposition => result.reports.push(verify_decomposition(
                function(scenario)?,
                control(scenario)?,
                &scenario.fn_y,
                fn_z(scenario)?,
                &sweep,
            )?),
            CheckId::HyersTrace => {
                let (report, traces) = trace_all(scenario, &sweep)?;
                result.reports.push(report);
                result.traces = traces;
            }
            CheckId::Alpha => {
                let phi = control(scenario)?;
                let pairs: Vec<(Vector, Vector)> = sweep
                    .samples
                    .iter()
                    .cloned()
                    .zip(sweep.partners.iter().cloned())
                    .collect();
                let estimate = estimate_alpha(phi, &pairs)?;
                let declared = phi.alpha();
                result.alpha = Some(AlphaCheck {
                    declared,
                    estimate,
                    passed: (estimate.alpha - declared).abs() <= ALPHA_TOLERANCE
                        && estimate.max_residual < ALPHA_TOLERANCE,
                });
            }
        }
    }
    for r in &mut result.reports {
        r.scenario = c.name.clone();
    }
    result.reports.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(result)
}

fn function(s: &Scenario) -> Result<&FunctionSpec> {
    s.function.as_ref().ok_or_else(|| config_err("scenario has no function"))
}

fn triple(s: &Scenario) -> Result<PexiderTriple> {
    s.triple_or_diagonal().ok_or_else(|| config_err("scenario has no function or triple"))
}

fn control(s: &Scenario) -> Result<&ControlFunction> {
    s.config.control.as_ref().ok_or_else(|| config_err("scenario has no control"))
}

fn fn_z(s: &Scenario) -> Result<&FuzzyNorm> {
    s.fn_z.as_ref().ok_or_else(|| config_err("scenario has no fuzzy_norm_z"))
}

fn axiom_reports(s: &Scenario, sweep: &Sweep) -> Result<(Vec<StabilityReport>, usize)> {
    let c = &s.config;
    let mut roles: Vec<(&str, &FuzzyNorm, Vec<Vector>)> = vec![("x", &s.fn_x, sweep.samples.clone())];
    roles.push((
        "y",
        &s.fn_y,
        sample_points(c.seed, STREAM_AXIOM_Y, c.sample_count, s.fn_y.dim(), c.sample_radius),
    ));
    if let Some(z) = &s.fn_z {
        roles.push(("z", z, sample_points(c.seed, STREAM_AXIOM_Z, c.sample_count, 1, c.sample_radius)));
    }
    let mut reports = Vec::new();
    let mut tuples = 0;
    for (role, norm, points) in roles {
        let axioms = check_axioms(norm, &points, &c.t_grid, &AXIOM_SCALARS, AxiomSettings::default())?;
        tuples += axioms.tuples_checked();
        for outcome in &axioms.outcomes {
            let mut report = StabilityReport::new(format!("axioms-{role}-{}", outcome.axiom.id().to_lowercase()));
            if let Some(w) = &outcome.worst {
                report.push(ReportRow {
                    x_id: w.x_index.unwrap_or(0),
                    t: w.t,
                    s: w.s,
                    lhs: w.lhs,
                    rhs: w.rhs,
                    margin: w.margin,
                    pass: outcome.passed(),
                });
            }
            reports.push(report.finish());
        }
    }
    Ok((reports, tuples))
}

fn trace_all(s: &Scenario, sweep: &Sweep) -> Result<(StabilityReport, Vec<TraceRecord>)> {
    let f = function(s)?;
    let kind = s.config.iteration.unwrap_or(IterationKind::DirectQuadratic);
    let outcomes: Vec<Option<HyersTrace>> = sweep
        .samples
        .par_iter()
        .map(|x| match run_trace(f, x, kind, &s.fn_y, &sweep.grid, &sweep.options) {
            Ok(t) => Ok(Some(t)),
            Err(Error::Overflow { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut report = StabilityReport::new("hyers-trace");
    let mut traces = Vec::new();
    for (x_id, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Some(trace) => {
                if !trace.converged {
                    report.nonconverged.push(x_id);
                }
                traces.push(TraceRecord { x_id, trace });
            }
            None => report.nonconverged.push(x_id),
        }
    }
    Ok((report.finish(), traces))
}
