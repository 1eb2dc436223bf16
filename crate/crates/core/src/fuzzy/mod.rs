//! Fuzzy norms N: X × ℝ → [0, 1] built from a crisp norm, the axiom checker,
//! and fuzzy convergence tests for sequences.
//!
//! Two constructions are supported: the rational family
//! `N_k(x, t) = t / (t + k‖x‖)` for `t > 0` (zero otherwise) and the crisp
//! indicator `N(x, t) = [t > ‖x‖]`. Both are non-decreasing in `t`, so the
//! quantifier "for all t > 0" is discretized on a logarithmic [`TGrid`].

mod axioms;
mod sequence;

pub use axioms::{check_axioms, Axiom, AxiomOutcome, AxiomReport, AxiomSettings, Counterexample};
pub use sequence::{
    fuzzy_cauchy, fuzzy_converged, CauchyVerdict, ConvergenceVerdict, SequenceSpec, WorstPoint,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{ClassicalNorm, NormKind, Vector};

/// Absolute slack applied to every membership comparison.
pub const MEMBERSHIP_SLACK: f64 = 1e-12;

/// Large level at which the limit half of (N5) is probed.
pub const T_INFINITY: f64 = 1e9;

/// Tolerance for `N(x, T_INFINITY) ≥ 1 - tol`.
pub const LIMIT_TOLERANCE: f64 = 1e-6;

/// A truth degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct MembershipValue(f64);

impl MembershipValue {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(MembershipValue(value))
        } else {
            Err(Error::invalid(format!(
                "membership value {value} outside [0, 1]"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Anything that assigns a truth degree to "‖x‖ ≤ t". The axiom checker works
/// against this trait so it can also be pointed at candidates that are not
/// fuzzy norms.
pub trait Membership {
    fn dim(&self) -> usize;

    /// Raw membership; not clamped, so a defective candidate can report
    /// out-of-range values.
    fn membership(&self, x: &Vector, t: f64) -> f64;

    /// For `x ≠ 0`, a level `t > 0` with `N(x, t) < 1`, when one is known in
    /// closed form. Enables the "only if" half of (N2).
    fn separating_level(&self, _x: &Vector) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FuzzyKind {
    /// `t / (t + k‖x‖)` for `t > 0`.
    Nk { k: f64 },
    /// `0` for `t ≤ ‖x‖`, `1` otherwise.
    Crisp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzyNorm {
    kind: FuzzyKind,
    base: ClassicalNorm,
}

impl FuzzyNorm {
    pub fn new(kind: FuzzyKind, base: ClassicalNorm) -> Result<Self> {
        if let FuzzyKind::Nk { k } = kind {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::invalid(format!("k must be a positive real, got {k}")));
            }
        }
        Ok(FuzzyNorm { kind, base })
    }

    pub fn nk(k: f64, base: ClassicalNorm) -> Result<Self> {
        Self::new(FuzzyKind::Nk { k }, base)
    }

    pub fn crisp(base: ClassicalNorm) -> Self {
        FuzzyNorm {
            kind: FuzzyKind::Crisp,
            base,
        }
    }

    /// The rational fuzzy norm on the real line, `t / (t + k|v|)`.
    pub fn nk_scalar(k: f64) -> Result<Self> {
        Self::nk(k, ClassicalNorm::l2(1))
    }

    pub fn kind(&self) -> FuzzyKind {
        self.kind
    }

    pub fn base(&self) -> &ClassicalNorm {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn eval(&self, x: &Vector, t: f64) -> Result<MembershipValue> {
        x.ensure_dim(self.dim())?;
        if t.is_nan() {
            return Err(Error::NonFinite("membership level t"));
        }
        Ok(MembershipValue(self.membership_of_norm(self.base.norm_unchecked(x), t)))
    }

    /// Membership as a function of the crisp norm value alone.
    pub fn membership_of_norm(&self, norm: f64, t: f64) -> f64 {
        match self.kind {
            FuzzyKind::Nk { k } => {
                if t <= 0.0 {
                    0.0
                } else if t.is_infinite() {
                    1.0
                } else {
                    t / (t + k * norm)
                }
            }
            FuzzyKind::Crisp => {
                if t <= norm {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Membership of a real number viewed as an element of ℝ with `|·|`;
    /// used for control-function values, whose sign is irrelevant by (N3).
    pub fn membership_of_scalar(&self, value: f64, t: f64) -> f64 {
        let norm = match self.base.kind() {
            NormKind::InnerProduct { matrix } => value.abs() * matrix[0][0].sqrt(),
            _ => value.abs(),
        };
        self.membership_of_norm(norm, t)
    }

    pub(crate) fn membership_unchecked(&self, x: &Vector, t: f64) -> f64 {
        self.membership_of_norm(self.base.norm_unchecked(x), t)
    }
}

impl Membership for FuzzyNorm {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn membership(&self, x: &Vector, t: f64) -> f64 {
        self.membership_unchecked(x, t)
    }

    fn separating_level(&self, x: &Vector) -> Option<f64> {
        let n = self.base.norm_unchecked(x);
        if n == 0.0 {
            return None;
        }
        Some(match self.kind {
            // N_k(x, k‖x‖) = 1/2.
            FuzzyKind::Nk { k } => k * n,
            // crisp: N(x, ‖x‖) = 0.
            FuzzyKind::Crisp => n,
        })
    }
}

pub fn eval_norm(fuzzy: &FuzzyNorm, x: &Vector, t: f64) -> Result<MembershipValue> {
    fuzzy.eval(x, t)
}

/// Logarithmically spaced levels `t_min = t_0 < … < t_{count-1} = t_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TGridSpec", into = "TGridSpec")]
pub struct TGrid {
    spec: TGridSpec,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TGridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl Default for TGridSpec {
    fn default() -> Self {
        TGridSpec {
            t_min: 1e-3,
            t_max: 1e6,
            count: 64,
        }
    }
}

impl TGrid {
    pub fn new(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if !(t_min.is_finite() && t_min > 0.0) {
            return Err(Error::invalid(format!("t_min must be positive, got {t_min}")));
        }
        if !(t_max.is_finite() && t_max > t_min) {
            return Err(Error::invalid(format!(
                "t_max must exceed t_min ({t_max} <= {t_min})"
            )));
        }
        if count < 2 {
            return Err(Error::invalid(format!("t-grid count must be at least 2, got {count}")));
        }
        let ratio = t_max / t_min;
        let last = (count - 1) as f64;
        let mut values: Vec<f64> = (0..count)
            .map(|i| t_min * ratio.powf(i as f64 / last))
            .collect();
        values[0] = t_min;
        values[count - 1] = t_max;
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("t-grid is not strictly increasing (range too narrow for count)"));
        }
        Ok(TGrid {
            spec: TGridSpec {
                t_min,
                t_max,
                count,
            },
            values,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spec(&self) -> TGridSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Default for TGrid {
    fn default() -> Self {
        let s = TGridSpec::default();
        TGrid::new(s.t_min, s.t_max, s.count).expect("default grid is valid")
    }
}

impl TryFrom<TGridSpec> for TGrid {
    type Error = Error;

    fn try_from(s: TGridSpec) -> Result<Self> {
        TGrid::new(s.t_min, s.t_max, s.count)
    }
}

impl From<TGrid> for TGridSpec {
    fn from(g: TGrid) -> Self {
        g.spec
    }
}

pub fn membership_curve(
    fuzzy: &FuzzyNorm,
    x: &Vector,
    grid: &TGrid,
) -> Result<Vec<(f64, MembershipValue)>> {
    x.ensure_dim(fuzzy.dim())?;
    let norm = fuzzy.base().norm_unchecked(x);
    Ok(grid
        .values()
        .iter()
        .map(|&t| (t, MembershipValue(fuzzy.membership_of_norm(norm, t))))
        .collect())
}
