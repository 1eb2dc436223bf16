//! Hyers-type iteration: `f(2ⁿx)/4ⁿ`, `f(2ⁿx)/2ⁿ` and their duals
//! `4ⁿf(2⁻ⁿx)`, `2ⁿf(2⁻ⁿx)`, with stopping on a classical tolerance and a
//! fuzzy membership threshold, plus memoized approximants built from them.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::catalog::{EvaluatedFunction, FunctionSpec, VectorMap};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNorm, TGrid};
use crate::space::Vector;

/// `‖2ⁿx‖∞` above this aborts the iteration.
pub const OVERFLOW_LIMIT: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationKind {
    /// `f(2ⁿx) / 4ⁿ`
    DirectQuadratic,
    /// `f(2ⁿx) / 2ⁿ`
    DirectAdditive,
    /// `4ⁿ f(2⁻ⁿx)`
    DualQuadratic,
    /// `2ⁿ f(2⁻ⁿx)`
    DualAdditive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ApproximantKind {
    Additive,
    Quadratic,
}

impl IterationKind {
    pub fn approximant_kind(self) -> ApproximantKind {
        match self {
            IterationKind::DirectQuadratic | IterationKind::DualQuadratic => ApproximantKind::Quadratic,
            IterationKind::DirectAdditive | IterationKind::DualAdditive => ApproximantKind::Additive,
        }
    }

    pub fn is_dual(self) -> bool {
        matches!(self, IterationKind::DualQuadratic | IterationKind::DualAdditive)
    }

    pub fn id(self) -> &'static str {
        match self {
            IterationKind::DirectQuadratic => "direct-quadratic",
            IterationKind::DirectAdditive => "direct-additive",
            IterationKind::DualQuadratic => "dual-quadratic",
            IterationKind::DualAdditive => "dual-additive",
        }
    }

    /// Returns `(argument scale, value weight)` for step `n`.
    fn factors(self, n: u32) -> (f64, f64) {
        let n = n as i32;
        let two_n = 2f64.powi(n);
        let inv_two_n = 2f64.powi(-n);
        match self {
            IterationKind::DirectQuadratic => (two_n, 4f64.powi(-n)),
            IterationKind::DirectAdditive => (two_n, inv_two_n),
            IterationKind::DualQuadratic => (inv_two_n, 4f64.powi(n)),
            IterationKind::DualAdditive => (inv_two_n, two_n),
        }
    }
}

/// The n-th Hyers iterate of `f` at `x`; `n = 0` gives `f(x)`.
pub fn iterate<F: VectorMap + ?Sized>(
    f: &F,
    x: &Vector,
    kind: IterationKind,
    n: u32,
) -> Result<Vector> {
    x.ensure_dim(f.domain_dim())?;
    if n == 0 {
        return f.apply(x);
    }
    let (arg_scale, weight) = kind.factors(n);
    let arg = x.scale(arg_scale);
    let magnitude = arg.max_abs();
    if !magnitude.is_finite() || magnitude > OVERFLOW_LIMIT || weight == 0.0 || !weight.is_finite() {
        return Err(Error::Overflow {
            n,
            magnitude,
            limit: OVERFLOW_LIMIT,
        });
    }
    let value = f.apply(&arg.checked("iterate argument")?)?;
    value.scale(weight).checked("iterate value").map_err(|_| Error::Overflow {
        n,
        magnitude,
        limit: OVERFLOW_LIMIT,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyersOptions {
    /// Classical bound on the successive difference.
    pub tol: f64,
    /// Required membership `> 1 - eps` of the successive difference at every level.
    pub eps: f64,
    pub max_n: u32,
    /// Start the stream at `n + offset`; used to probe uniqueness of the limit.
    #[serde(default)]
    pub offset: u32,
}

impl Default for HyersOptions {
    fn default() -> Self {
        HyersOptions {
            tol: 1e-9,
            eps: 1e-6,
            max_n: 60,
            offset: 0,
        }
    }
}

impl HyersOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::invalid(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::invalid(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if self.max_n < 1 {
            return Err(Error::invalid("max_n must be at least 1"));
        }
        Ok(())
    }
}

/// Record of one Hyers run at a single point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyersTrace {
    pub x: Vector,
    pub kind: IterationKind,
    pub offset: u32,
    /// `(n, iterate(n + offset))` for `n = 0..=n_stop`.
    pub iterates: Vec<(u32, Vector)>,
    /// `successive_errors[n - 1] = ‖iterate_n − iterate_{n−1}‖`.
    pub successive_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    /// `fuzzy_memberships[n][j] = N(iterate_n − iterate_final, t_j)`.
    pub fuzzy_memberships: Vec<Vec<f64>>,
    pub converged: bool,
    pub n_stop: u32,
}

impl HyersTrace {
    pub fn final_value(&self) -> &Vector {
        &self.iterates.last().expect("trace holds at least f(x)").1
    }

    pub fn last_error(&self) -> f64 {
        self.successive_errors.last().copied().unwrap_or(0.0)
    }

    /// `successive_errors[n] / successive_errors[n − 1]`.
    pub fn error_ratios(&self) -> Vec<f64> {
        self.successive_errors
            .windows(2)
            .map(|w| w[1] / w[0])
            .collect()
    }
}

/// Iterates until the successive difference is below `tol` classically and
/// above `1 - eps` in membership at every level, or `max_n` is reached.
pub fn run_trace<F: VectorMap + ?Sized>(
    f: &F,
    x: &Vector,
    kind: IterationKind,
    fn_y: &FuzzyNorm,
    grid: &TGrid,
    options: &HyersOptions,
) -> Result<HyersTrace> {
    options.validate()?;
    if fn_y.dim() != f.codomain_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.codomain_dim(),
            found: fn_y.dim(),
        });
    }
    let threshold = 1.0 - options.eps;
    let mut iterates = vec![(0, iterate(f, x, kind, options.offset)?)];
    let mut errors = Vec::new();
    let mut converged = false;
    for n in 1..=options.max_n {
        let next = iterate(f, x, kind, n + options.offset)?;
        let diff = &next - &iterates.last().expect("nonempty").1;
        let norm = fn_y.base().norm_unchecked(&diff);
        let fuzzy_ok = grid
            .values()
            .iter()
            .all(|&t| fn_y.membership_of_norm(norm, t) > threshold);
        errors.push(norm);
        iterates.push((n, next));
        if norm < options.tol && fuzzy_ok {
            converged = true;
            break;
        }
    }
    let n_stop = iterates.last().expect("nonempty").0;
    let last = iterates.last().expect("nonempty").1.clone();
    let fuzzy_memberships = iterates
        .iter()
        .map(|(_, v)| {
            let norm = fn_y.base().norm_unchecked(&(v - &last));
            grid.values()
                .iter()
                .map(|&t| fn_y.membership_of_norm(norm, t))
                .collect()
        })
        .collect();
    Ok(HyersTrace {
        x: x.clone(),
        kind,
        offset: options.offset,
        iterates,
        successive_errors: errors,
        t_values: grid.values().to_vec(),
        fuzzy_memberships,
        converged,
        n_stop,
    })
}

#[derive(Debug, Clone)]
enum MemoEntry {
    Converged(Vector),
    Diverged { max_n: u32, last_error: f64 },
}

/// The limit map `Q` (or `T`) of a Hyers iteration, evaluated pointwise and
/// memoized on the exact bit pattern of `x`.
pub struct Approximant {
    source: EvaluatedFunction,
    iteration: IterationKind,
    fn_y: FuzzyNorm,
    grid: TGrid,
    options: HyersOptions,
    memo: RwLock<HashMap<Vec<u64>, MemoEntry>>,
}

impl fmt::Debug for Approximant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Approximant")
            .field("iteration", &self.iteration)
            .field("options", &self.options)
            .finish_non_exhaustive()
    }
}

impl Approximant {
    pub fn new(
        source: EvaluatedFunction,
        iteration: IterationKind,
        fn_y: FuzzyNorm,
        grid: TGrid,
        options: HyersOptions,
    ) -> Result<Self> {
        options.validate()?;
        if fn_y.dim() != source.codomain_dim() {
            return Err(Error::DimensionMismatch {
                expected: source.codomain_dim(),
                found: fn_y.dim(),
            });
        }
        Ok(Approximant {
            source,
            iteration,
            fn_y,
            grid,
            options,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn kind(&self) -> ApproximantKind {
        self.iteration.approximant_kind()
    }

    pub fn iteration(&self) -> IterationKind {
        self.iteration
    }

    pub fn options(&self) -> &HyersOptions {
        &self.options
    }

    pub fn trace(&self, x: &Vector) -> Result<HyersTrace> {
        run_trace(&*self.source, x, self.iteration, &self.fn_y, &self.grid, &self.options)
    }

    /// The final iterate at `x`, or [`Error::NotConverged`] when the run hit
    /// `max_n` first.
    pub fn eval(&self, x: &Vector) -> Result<Vector> {
        let key = x.bit_key();
        if let Some(entry) = self.memo.read().expect("memo lock").get(&key) {
            return entry_result(entry);
        }
        let trace = self.trace(x)?;
        let entry = if trace.converged {
            MemoEntry::Converged(trace.final_value().clone())
        } else {
            MemoEntry::Diverged {
                max_n: self.options.max_n,
                last_error: trace.last_error(),
            }
        };
        let mut memo = self.memo.write().expect("memo lock");
        entry_result(memo.entry(key).or_insert(entry))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }
}

fn entry_result(entry: &MemoEntry) -> Result<Vector> {
    match entry {
        MemoEntry::Converged(v) => Ok(v.clone()),
        MemoEntry::Diverged { max_n, last_error } => Err(Error::NotConverged {
            max_n: *max_n,
            last_error: *last_error,
        }),
    }
}

impl VectorMap for Approximant {
    fn domain_dim(&self) -> usize {
        self.source.domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        self.source.codomain_dim()
    }

    fn apply(&self, x: &Vector) -> Result<Vector> {
        self.eval(x)
    }
}

pub fn build_approximant(
    f: &FunctionSpec,
    iteration: IterationKind,
    fn_y: &FuzzyNorm,
    grid: &TGrid,
    options: HyersOptions,
) -> Result<Approximant> {
    f.validate()?;
    Approximant::new(
        std::sync::Arc::new(f.clone()),
        iteration,
        fn_y.clone(),
        grid.clone(),
        options,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{even_part, InnerProductVariant, Matrix};
    use crate::space::{ClassicalNorm, NormKind};

    fn s(v: f64) -> Vector {
        Vector::scalar(v).unwrap()
    }

    fn algebra() -> FunctionSpec {
        FunctionSpec::normed_algebra(s(1.0))
    }

    fn n2() -> FuzzyNorm {
        FuzzyNorm::nk_scalar(2.0).unwrap()
    }

    fn perturbed(r: f64) -> FunctionSpec {
        FunctionSpec::PerturbedQuadratic {
            matrix: Matrix::new(vec![vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap(),
            direction: s(1.0),
            c: 0.75,
            r,
            perturbation_direction: None,
            norm: NormKind::L2,
        }
    }

    #[test]
    fn algebra_iterate_at_three() {
        assert_eq!(iterate(&algebra(), &s(1.0), IterationKind::DirectQuadratic, 3).unwrap().as_slice(), &[1.125]);
        assert_eq!(iterate(&algebra(), &s(2.0), IterationKind::DirectQuadratic, 0).unwrap().as_slice(), &[6.0]);
    }

    #[test]
    fn quadratic_form_is_fixed() {
        let f = FunctionSpec::quadratic_form(Matrix::identity(2), Vector::basis(1, 0)).unwrap();
        let x = Vector::new(vec![0.3, -1.7]).unwrap();
        let fx = f.apply(&x).unwrap();
        for n in 0..40 {
            assert_eq!(iterate(&f, &x, IterationKind::DirectQuadratic, n).unwrap(), fx);
        }
        let tr = run_trace(&f, &x, IterationKind::DirectQuadratic, &n2(), &TGrid::default(), &HyersOptions::default()).unwrap();
        assert!(tr.converged);
        assert_eq!(tr.n_stop, 1);
        assert_eq!(tr.successive_errors, vec![0.0]);
    }

    #[test]
    fn algebra_trace_errors_halve() {
        let tr = run_trace(
            &algebra(),
            &s(1.0),
            IterationKind::DirectQuadratic,
            &n2(),
            &TGrid::default(),
            &HyersOptions::default(),
        )
        .unwrap();
        assert!(tr.converged);
        for (i, e) in tr.successive_errors.iter().enumerate() {
            // ‖x‖·x0 / 2ⁿ halves each step: difference between steps n and n-1 is 2⁻ⁿ
            assert_eq!(*e, 2f64.powi(-(i as i32 + 1)));
        }
        assert_eq!(tr.fuzzy_memberships.len(), tr.iterates.len());
        assert!(tr.fuzzy_memberships.last().unwrap().iter().all(|&m| m == 1.0));
    }

    #[test]
    fn dual_iteration_on_cubic_perturbation() {
        let f = perturbed(3.0);
        let x = Vector::new(vec![0.8, -0.6]).unwrap();
        let y_norm = FuzzyNorm::nk_scalar(1.0).unwrap();
        let tr = run_trace(&f, &x, IterationKind::DualQuadratic, &y_norm, &TGrid::default(), &HyersOptions::default()).unwrap();
        assert!(tr.converged);
        for r in tr.error_ratios().iter().take(20) {
            assert!((r - 0.5).abs() < 1e-6, "{r}");
        }
        // 4ⁿ·c‖2⁻ⁿx‖³ = c‖x‖³/2ⁿ, so e_1 = c‖x‖³/2
        assert!((tr.successive_errors[0] - 0.75 / 2.0).abs() < 1e-14);

        let direct = run_trace(&f, &x, IterationKind::DirectQuadratic, &y_norm, &TGrid::default(), &HyersOptions::default()).unwrap();
        assert!(!direct.converged);
        assert_eq!(direct.n_stop, 60);
        for r in direct.error_ratios() {
            assert!((r - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn geometric_decay_matches_exponent() {
        let x = Vector::new(vec![1.3, 0.4]).unwrap();
        let y_norm = FuzzyNorm::nk_scalar(1.0).unwrap();
        let opts = HyersOptions::default();
        for (r, kind, want) in [
            (1.0, IterationKind::DirectQuadratic, 0.5),
            (0.5, IterationKind::DirectQuadratic, 2f64.powf(-1.5)),
            (3.0, IterationKind::DualQuadratic, 0.5),
            (4.0, IterationKind::DualQuadratic, 0.25),
        ] {
            let tr = run_trace(&perturbed(r), &x, kind, &y_norm, &TGrid::default(), &opts).unwrap();
            assert!(tr.converged);
            let ratios: Vec<f64> = tr
                .successive_errors
                .windows(2)
                .filter(|w| w[1] > 1e-10)
                .map(|w| w[1] / w[0])
                .collect();
            assert!(!ratios.is_empty());
            for q in ratios {
                assert!(((q - want) / want).abs() < 0.05, "r={r} ratio {q} want {want}");
            }
        }
    }

    #[test]
    fn approximant_recovers_square() {
        let q = build_approximant(&algebra(), IterationKind::DirectQuadratic, &n2(), &TGrid::default(), HyersOptions::default()).unwrap();
        for i in -20..=20 {
            let x = i as f64 * 0.5 + 0.01;
            let v = q.eval(&s(x)).unwrap().as_slice()[0];
            assert!((v - x * x).abs() < 1e-8, "x={x}");
        }
        assert_eq!(q.memo_len(), 41);
        assert_eq!(q.eval(&s(3.01)).unwrap(), q.eval(&s(3.01)).unwrap());
    }

    #[test]
    fn inner_product_even_part_limit() {
        let f = FunctionSpec::inner_product_family(
            Vector::new(vec![1.0, 0.5]).unwrap(),
            Vector::new(vec![1.0, 0.0]).unwrap(),
            Vector::new(vec![0.0, 2.0]).unwrap(),
            Vector::new(vec![0.5, 0.5]).unwrap(),
            InnerProductVariant::F,
        )
        .unwrap();
        let fy = FuzzyNorm::nk(1.0, ClassicalNorm::l2(2)).unwrap();
        let q = Approximant::new(even_part(&f), IterationKind::DirectQuadratic, fy, TGrid::default(), HyersOptions::default()).unwrap();
        let x = Vector::new(vec![1.5, -0.7]).unwrap();
        let n2 = x.dot(&x);
        let v = q.eval(&x).unwrap();
        assert!((v.as_slice()[0]).abs() < 1e-8);
        assert!((v.as_slice()[1] - 2.0 * n2).abs() < 1e-8);
    }

    #[test]
    fn linear_map_is_its_own_additive_limit() {
        let f = FunctionSpec::LinearMap {
            matrix: Matrix::new(vec![vec![1.0, -2.0], vec![0.5, 3.0]]).unwrap(),
        };
        let fy = FuzzyNorm::nk(1.0, ClassicalNorm::l2(2)).unwrap();
        let t = build_approximant(&f, IterationKind::DirectAdditive, &fy, &TGrid::default(), HyersOptions::default()).unwrap();
        let x = Vector::new(vec![0.37, -1.91]).unwrap();
        assert_eq!(t.eval(&x).unwrap(), f.apply(&x).unwrap());
    }

    #[test]
    fn non_convergence_is_explicit() {
        let f = perturbed(3.0);
        let fy = FuzzyNorm::nk_scalar(1.0).unwrap();
        let q = build_approximant(&f, IterationKind::DirectQuadratic, &fy, &TGrid::default(), HyersOptions::default()).unwrap();
        let err = q.eval(&Vector::new(vec![1.0, 1.0]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotConverged { max_n: 60, .. }));
    }

    #[test]
    fn overflow_guard() {
        let err = iterate(&algebra(), &s(1.0), IterationKind::DirectQuadratic, 600).unwrap_err();
        assert!(matches!(err, Error::Overflow { n: 600, .. }));
    }

    #[test]
    fn options_validation() {
        let f = algebra();
        let bad = HyersOptions { tol: 0.0, ..HyersOptions::default() };
        assert!(run_trace(&f, &s(1.0), IterationKind::DirectQuadratic, &n2(), &TGrid::default(), &bad).is_err());
        let bad = HyersOptions { max_n: 0, ..HyersOptions::default() };
        assert!(run_trace(&f, &s(1.0), IterationKind::DirectQuadratic, &n2(), &TGrid::default(), &bad).is_err());
    }
}
