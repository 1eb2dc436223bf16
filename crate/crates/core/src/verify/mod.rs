//! Defect operators, hypothesis checks, composite bounds, stability constants
//! and the conclusion inequalities, evaluated as membership comparisons over
//! sampled points.

mod constants;
mod defect;
mod report;
mod stability;

use rayon::prelude::*;

pub use constants::{
    classical_constant, decomposition_constant, even_pexider_constants, odd_pexider_constants,
    quadratic_bound_constant, sharp_quadratic_bound_constant, StabilityConstant,
};
pub use defect::{
    check_control_bounded, check_q_almost, pexider_defect, quadratic_defect, six_point_bound,
    three_point_bound,
};
pub use report::{ReportRow, ReportSummary, StabilityReport};
pub use stability::{
    decompose, verify_classical, verify_decomposition, verify_even_pexider, verify_odd_pexider,
    verify_quadratic_stability, Decomposition,
};

use crate::error::{Error, Result};
use crate::fuzzy::TGrid;
use crate::hyers::HyersOptions;
use crate::space::Vector;

/// Sample points and levels shared by every check in a run.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub samples: Vec<Vector>,
    /// `partners[i]` is the `y` paired with `samples[i]` in two-point checks.
    pub partners: Vec<Vector>,
    pub grid: TGrid,
    pub options: HyersOptions,
}

impl Sweep {
    pub fn new(samples: Vec<Vector>, partners: Vec<Vector>, grid: TGrid, options: HyersOptions) -> Result<Self> {
        if samples.len() != partners.len() {
            return Err(Error::invalid(format!(
                "{} samples but {} partners",
                samples.len(),
                partners.len()
            )));
        }
        options.validate()?;
        Ok(Sweep {
            samples,
            partners,
            grid,
            options,
        })
    }

    /// Pairs every sample with itself.
    pub fn diagonal(samples: Vec<Vector>, grid: TGrid, options: HyersOptions) -> Result<Self> {
        let partners = samples.clone();
        Self::new(samples, partners, grid, options)
    }

    fn ensure_dim(&self, dim: usize) -> Result<()> {
        self.samples
            .iter()
            .chain(&self.partners)
            .try_for_each(|x| x.ensure_dim(dim))
    }
}

pub(crate) struct SampleRows {
    residual: Option<f64>,
    rows: Vec<ReportRow>,
}

/// Maps a Hyers failure to `None` so the sample is reported as non-converged.
pub(crate) fn converged<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotConverged { .. } | Error::Overflow { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs `per_sample` over `0..n` in parallel and appends the i-th returned
/// block of rows to `reports[i]`, in sample order.
pub(crate) fn collect<F>(mut reports: Vec<StabilityReport>, n: usize, per_sample: F) -> Result<Vec<StabilityReport>>
where
    F: Fn(usize) -> Result<Option<Vec<SampleRows>>> + Sync + Send,
{
    let blocks: Vec<Option<Vec<SampleRows>>> =
        (0..n).into_par_iter().map(&per_sample).collect::<Result<_>>()?;
    for (x_id, block) in blocks.into_iter().enumerate() {
        match block {
            Some(parts) => {
                debug_assert_eq!(parts.len(), reports.len());
                for (report, part) in reports.iter_mut().zip(parts) {
                    if let Some(r) = part.residual {
                        report.note_residual(r);
                    }
                    report.rows.extend(part.rows);
                }
            }
            None => reports.iter_mut().for_each(|r| r.nonconverged.push(x_id)),
        }
    }
    Ok(reports.into_iter().map(StabilityReport::finish).collect())
}
