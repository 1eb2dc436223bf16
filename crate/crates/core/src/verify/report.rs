use serde::Serialize;

use crate::fuzzy::MEMBERSHIP_SLACK;

/// One membership comparison `lhs ≥ rhs` at sample `x_id` and level `t`
/// (and `s` for two-level checks).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportRow {
    pub x_id: usize,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(x_id: usize, t: f64, s: Option<f64>, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        ReportRow {
            x_id,
            t,
            s,
            lhs,
            rhs,
            margin,
            pass: margin >= -MEMBERSHIP_SLACK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportSummary {
    /// `None` when the report has no rows.
    pub min_margin: Option<f64>,
    pub fail_count: usize,
    pub row_count: usize,
    pub nonconverged_count: usize,
}

/// Rows of one inequality check, sorted by `(x_id, t, s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub scenario: String,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    /// Largest classical norm of the left-hand residual vector.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    /// Samples at which a Hyers iteration did not converge; they have no rows.
    pub nonconverged: Vec<usize>,
    pub rows: Vec<ReportRow>,
}

impl StabilityReport {
    pub fn new(check: impl Into<String>) -> Self {
        StabilityReport {
            scenario: String::new(),
            check: check.into(),
            constant: None,
            max_residual: None,
            nonconverged: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant = Some(c);
        self
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub(crate) fn note_residual(&mut self, r: f64) {
        self.max_residual = Some(self.max_residual.map_or(r, |m| m.max(r)));
    }

    /// Sorts rows and non-converged ids.
    pub fn finish(mut self) -> Self {
        self.rows.sort_by(|a, b| {
            a.x_id
                .cmp(&b.x_id)
                .then(a.t.total_cmp(&b.t))
                .then(a.s.unwrap_or(0.0).total_cmp(&b.s.unwrap_or(0.0)))
        });
        self.nonconverged.sort_unstable();
        self.nonconverged.dedup();
        self
    }

    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            min_margin: self.rows.iter().map(|r| r.margin).reduce(f64::min),
            fail_count: self.rows.iter().filter(|r| !r.pass).count(),
            row_count: self.rows.len(),
            nonconverged_count: self.nonconverged.len(),
        }
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn converged(&self) -> bool {
        self.nonconverged.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_uses_slack() {
        assert!(ReportRow::new(0, 1.0, None, 0.5, 0.5 + 1e-13).pass);
        assert!(!ReportRow::new(0, 1.0, None, 0.5, 0.5 + 1e-11).pass);
        assert!(!ReportRow::new(0, 1.0, None, f64::NAN, 0.0).pass);
    }

    #[test]
    fn summary_and_order() {
        let mut r = StabilityReport::new("c");
        r.push(ReportRow::new(1, 2.0, None, 1.0, 0.5));
        r.push(ReportRow::new(0, 3.0, None, 0.2, 0.5));
        r.push(ReportRow::new(0, 1.0, None, 0.9, 0.5));
        let r = r.finish();
        let order: Vec<_> = r.rows.iter().map(|row| (row.x_id, row.t)).collect();
        assert_eq!(order, vec![(0, 1.0), (0, 3.0), (1, 2.0)]);
        let s = r.summary();
        assert_eq!(s.fail_count, 1);
        assert!((s.min_margin.unwrap() + 0.3).abs() < 1e-15);
        assert!(!r.passed());
        assert_eq!(StabilityReport::new("e").summary().min_margin, None);
    }
}
