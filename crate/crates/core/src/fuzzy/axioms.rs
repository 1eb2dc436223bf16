use serde::Serialize;

use super::{Membership, TGrid, LIMIT_TOLERANCE, MEMBERSHIP_SLACK, T_INFINITY};
use crate::error::{Error, Result};
use crate::space::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    /// Values lie in `[0, 1]`.
    Range,
    /// `N(x, c) = 0` for `c ≤ 0`.
    N1,
    /// `N(0, t) = 1` for `t > 0`.
    N2If,
    /// `x ≠ 0` implies `N(x, t) < 1` for some `t > 0`.
    N2OnlyIf,
    /// `N(cx, t) = N(x, t/|c|)` for `c ≠ 0`.
    N3,
    /// `N(x + y, s + t) ≥ min(N(x, s), N(y, t))`.
    N4,
    /// `t ↦ N(x, t)` is non-decreasing.
    N5Monotone,
    /// `N(x, t) → 1` as `t → ∞`, probed at a single large level.
    N5Limit,
}

impl Axiom {
    pub fn id(self) -> &'static str {
        match self {
            Axiom::Range => "range",
            Axiom::N1 => "N1",
            Axiom::N2If => "N2-if",
            Axiom::N2OnlyIf => "N2-only-if",
            Axiom::N3 => "N3",
            Axiom::N4 => "N4",
            Axiom::N5Monotone => "N5-monotone",
            Axiom::N5Limit => "N5-limit",
        }
    }
}

/// One evaluated tuple. Indices refer to the `x_samples` slice; `x_index` is
/// `None` when the tuple is at the origin (N2).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub x_index: Option<usize>,
    pub y_index: Option<usize>,
    pub s: Option<f64>,
    pub t: f64,
    pub c: Option<f64>,
    /// The membership (or combination) on the left of the axiom.
    pub lhs: f64,
    /// What the axiom requires it to dominate or equal.
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomOutcome {
    pub axiom: Axiom,
    pub checked: usize,
    pub worst: Option<Counterexample>,
    pub first_failure: Option<Counterexample>,
}

impl AxiomOutcome {
    fn new(axiom: Axiom) -> Self {
        AxiomOutcome {
            axiom,
            checked: 0,
            worst: None,
            first_failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn worst_margin(&self) -> f64 {
        self.worst.as_ref().map_or(f64::INFINITY, |w| w.margin)
    }

    fn record(&mut self, tuple: Counterexample, ok: bool) {
        self.checked += 1;
        let worse = match &self.worst {
            None => true,
            Some(w) => tuple.margin < w.margin || tuple.margin.is_nan(),
        };
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(tuple.clone());
        }
        if worse {
            self.worst = Some(tuple);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(AxiomOutcome::passed)
    }

    pub fn tuples_checked(&self) -> usize {
        self.outcomes.iter().map(|o| o.checked).sum()
    }

    pub fn outcome(&self, axiom: Axiom) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| o.axiom == axiom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomSettings {
    pub slack: f64,
    pub t_infinity: f64,
    pub limit_tolerance: f64,
}

impl Default for AxiomSettings {
    fn default() -> Self {
        AxiomSettings {
            slack: MEMBERSHIP_SLACK,
            t_infinity: T_INFINITY,
            limit_tolerance: LIMIT_TOLERANCE,
        }
    }
}

fn tuple(x_index: Option<usize>, t: f64, lhs: f64, rhs: f64, margin: f64) -> Counterexample {
    Counterexample {
        x_index,
        y_index: None,
        s: None,
        t,
        c: None,
        lhs,
        rhs,
        margin,
    }
}

/// Samples (N1)–(N5) on the given points. N4 pairs each sample with its
/// successor (cyclically) and sweeps the full `(s, t)` grid; N3 sweeps every
/// nonzero scalar against every level. Nonpositive levels for N1 are probed
/// at `-1`, `0` and the negated grid, in that order.
pub fn check_axioms<M: Membership + ?Sized>(
    candidate: &M,
    x_samples: &[Vector],
    grid: &TGrid,
    scalars: &[f64],
    settings: AxiomSettings,
) -> Result<AxiomReport> {
    if x_samples.is_empty() {
        return Err(Error::invalid("axiom check needs at least one sample"));
    }
    let dim = candidate.dim();
    for x in x_samples {
        x.ensure_dim(dim)?;
    }
    let slack = settings.slack;
    let ts = grid.values();
    let nonpositive: Vec<f64> = [-1.0, 0.0]
        .into_iter()
        .chain(ts.iter().map(|t| -t))
        .collect();

    let mut range = AxiomOutcome::new(Axiom::Range);
    let mut n1 = AxiomOutcome::new(Axiom::N1);
    let mut n2_if = AxiomOutcome::new(Axiom::N2If);
    let mut n2_only_if = AxiomOutcome::new(Axiom::N2OnlyIf);
    let mut n3 = AxiomOutcome::new(Axiom::N3);
    let mut n4 = AxiomOutcome::new(Axiom::N4);
    let mut n5_mono = AxiomOutcome::new(Axiom::N5Monotone);
    let mut n5_limit = AxiomOutcome::new(Axiom::N5Limit);

    for (i, x) in x_samples.iter().enumerate() {
        for &t in nonpositive.iter().chain(ts) {
            let v = candidate.membership(x, t);
            let margin = if v.is_nan() { f64::NEG_INFINITY } else { v.min(1.0 - v) };
            range.record(tuple(Some(i), t, v, 0.0, margin), margin >= -slack);
        }
        for &c in &nonpositive {
            let v = candidate.membership(x, c);
            let margin = if v.is_nan() { f64::NEG_INFINITY } else { -v.abs() };
            n1.record(tuple(Some(i), c, v, 0.0, margin), margin >= -slack);
        }

        let mut prev: Option<(f64, f64)> = None;
        for &t in ts {
            let v = candidate.membership(x, t);
            if let Some((pt, pv)) = prev {
                let margin = v - pv;
                let mut tup = tuple(Some(i), t, v, pv, margin);
                tup.s = Some(pt);
                n5_mono.record(tup, margin >= -slack);
            }
            prev = Some((t, v));
        }
        let v = candidate.membership(x, settings.t_infinity);
        let bound = 1.0 - settings.limit_tolerance;
        n5_limit.record(
            tuple(Some(i), settings.t_infinity, v, bound, v - bound),
            v >= bound,
        );

        if !x.is_zero() {
            if let Some(t) = candidate.separating_level(x) {
                let v = candidate.membership(x, t);
                let margin = 1.0 - v;
                n2_only_if.record(tuple(Some(i), t, v, 1.0, margin), margin > 0.0);
            }
        }

        for &c in scalars {
            if c == 0.0 || !c.is_finite() {
                continue;
            }
            let cx = x.scale(c);
            for &t in ts {
                let lhs = candidate.membership(&cx, t);
                let rhs = candidate.membership(x, t / c.abs());
                let margin = -(lhs - rhs).abs();
                let mut tup = tuple(Some(i), t, lhs, rhs, margin);
                tup.c = Some(c);
                n3.record(tup, margin >= -slack);
            }
        }

        let j = (i + 1) % x_samples.len();
        let y = &x_samples[j];
        let xy = x + y;
        let mx: Vec<f64> = ts.iter().map(|&s| candidate.membership(x, s)).collect();
        let my: Vec<f64> = ts.iter().map(|&t| candidate.membership(y, t)).collect();
        for (si, &s) in ts.iter().enumerate() {
            for (ti, &t) in ts.iter().enumerate() {
                let lhs = candidate.membership(&xy, s + t);
                let rhs = mx[si].min(my[ti]);
                let margin = lhs - rhs;
                let mut tup = tuple(Some(i), t, lhs, rhs, margin);
                tup.y_index = Some(j);
                tup.s = Some(s);
                n4.record(tup, margin >= -slack);
            }
        }
    }

    let zero = Vector::zeros(dim);
    for &t in ts {
        let v = candidate.membership(&zero, t);
        let margin = -(1.0 - v).abs();
        n2_if.record(tuple(None, t, v, 1.0, margin), margin >= -slack);
    }

    Ok(AxiomReport {
        outcomes: vec![range, n1, n2_if, n2_only_if, n3, n4, n5_mono, n5_limit],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::FuzzyNorm;
    use crate::space::ClassicalNorm;

    /// `t / (t + ‖x‖)` evaluated for every real `t`, including negative ones.
    struct Unguarded;

    impl Membership for Unguarded {
        fn dim(&self) -> usize {
            1
        }

        fn membership(&self, x: &Vector, t: f64) -> f64 {
            t / (t + x.as_slice()[0].abs())
        }
    }

    fn samples() -> Vec<Vector> {
        [0.5, -3.0, 2.0, 7.25, -0.125]
            .iter()
            .map(|&v| Vector::scalar(v).unwrap())
            .collect()
    }

    #[test]
    fn catalog_norms_pass() {
        let grid = TGrid::new(1e-3, 1e6, 24).unwrap();
        let scalars = [-2.0, -0.5, 0.0, 0.3, 4.0];
        for norm in [
            FuzzyNorm::nk_scalar(1.0).unwrap(),
            FuzzyNorm::crisp(ClassicalNorm::l2(1)),
        ] {
            let r = check_axioms(&norm, &samples(), &grid, &scalars, AxiomSettings::default())
                .unwrap();
            assert!(r.all_passed(), "{r:#?}");
            assert!(r.outcome(Axiom::N2OnlyIf).unwrap().checked == 5);
        }
    }

    #[test]
    fn unguarded_candidate_fails_n1_at_minus_one() {
        let grid = TGrid::new(1e-3, 1e6, 8).unwrap();
        let r = check_axioms(&Unguarded, &samples(), &grid, &[2.0], AxiomSettings::default())
            .unwrap();
        let n1 = r.outcome(Axiom::N1).unwrap();
        let cx = n1.first_failure.as_ref().expect("N1 must fail");
        assert_eq!(cx.t, -1.0);
        assert_eq!(cx.x_index, Some(0));
        // -1 / (-1 + 0.5) = 2
        assert_eq!(cx.lhs, 2.0);
        assert!(!r.outcome(Axiom::Range).unwrap().passed());
        assert!(!r.all_passed());
    }

    #[test]
    fn zero_scalars_are_skipped_for_n3() {
        let grid = TGrid::new(1.0, 10.0, 3).unwrap();
        let norm = FuzzyNorm::nk_scalar(2.0).unwrap();
        let r = check_axioms(&norm, &samples(), &grid, &[0.0], AxiomSettings::default()).unwrap();
        assert_eq!(r.outcome(Axiom::N3).unwrap().checked, 0);
    }

    #[test]
    fn empty_samples_rejected() {
        let norm = FuzzyNorm::nk_scalar(1.0).unwrap();
        assert!(check_axioms(&norm, &[], &TGrid::default(), &[1.0], AxiomSettings::default())
            .is_err());
    }
}
