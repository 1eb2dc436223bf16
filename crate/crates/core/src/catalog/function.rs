use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{norm_of, NormKind, Vector};

/// A deterministic map ℝᵐ → ℝⁿ.
pub trait VectorMap: Send + Sync {
    fn domain_dim(&self) -> usize;
    fn codomain_dim(&self) -> usize;
    fn apply(&self, x: &Vector) -> Result<Vector>;
}

/// A function under test, a parity part of one, or a Hyers approximant.
pub type EvaluatedFunction = Arc<dyn VectorMap>;

impl<T: VectorMap + ?Sized> VectorMap for Arc<T> {
    fn domain_dim(&self) -> usize {
        (**self).domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        (**self).codomain_dim()
    }

    fn apply(&self, x: &Vector) -> Result<Vector> {
        (**self).apply(x)
    }
}

impl<T: VectorMap + ?Sized> VectorMap for &T {
    fn domain_dim(&self) -> usize {
        (**self).domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        (**self).codomain_dim()
    }

    fn apply(&self, x: &Vector) -> Result<Vector> {
        (**self).apply(x)
    }
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("matrix must be a nonempty rectangle"));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * x[j]).sum())
            .collect()
    }

    /// xᵀAx.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::new(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.data.chunks(m.cols).map(<[f64]>::to_vec).collect()
    }
}

/// Which member of the inner-product Pexider triple to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnerProductVariant {
    /// `<x,a> x0 + ‖x‖² y0 + √‖x‖ z0`
    #[default]
    F,
    /// `<x,a> x0 + ‖x‖² y0`
    G,
    /// `‖x‖² y0 + √‖x‖ z0`
    H,
}

fn default_l2() -> NormKind {
    NormKind::L2
}

/// Closed-form function families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `(xᵀAx) · direction` for symmetric A.
    QuadraticForm { matrix: Matrix, direction: Vector },
    /// `(xᵀAx) · direction + c‖x‖ʳ · perturbation_direction`; the perturbation
    /// direction defaults to `direction`.
    PerturbedQuadratic {
        matrix: Matrix,
        direction: Vector,
        c: f64,
        r: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perturbation_direction: Option<Vector>,
        #[serde(default = "default_l2")]
        norm: NormKind,
    },
    /// `x∘x + ‖x‖∞ x0` on the algebra ℝᵈ with componentwise product; on ℝ
    /// this is `x² + |x| x0`.
    NormedAlgebra { x0: Vector },
    /// The inner-product family on Euclidean ℝᵐ with values in ℝⁿ.
    InnerProductFamily {
        a: Vector,
        x0: Vector,
        y0: Vector,
        z0: Vector,
        #[serde(default)]
        variant: InnerProductVariant,
    },
    /// `x ↦ Lx`.
    LinearMap { matrix: Matrix },
    /// `(Σ cᵢ xⁱ) · direction` on the real line.
    ScalarPolynomial { coeffs: Vec<f64>, direction: Vector },
    /// Pointwise sum of functions with common dimensions.
    Sum { terms: Vec<FunctionSpec> },
}

impl FunctionSpec {
    pub fn quadratic_form(matrix: Matrix, direction: Vector) -> Result<Self> {
        let f = FunctionSpec::QuadraticForm { matrix, direction };
        f.validate()?;
        Ok(f)
    }

    pub fn normed_algebra(x0: Vector) -> Self {
        FunctionSpec::NormedAlgebra { x0 }
    }

    pub fn inner_product_family(
        a: Vector,
        x0: Vector,
        y0: Vector,
        z0: Vector,
        variant: InnerProductVariant,
    ) -> Result<Self> {
        let f = FunctionSpec::InnerProductFamily {
            a,
            x0,
            y0,
            z0,
            variant,
        };
        f.validate()?;
        Ok(f)
    }

    /// Checks internal consistency and returns `(domain_dim, codomain_dim)`.
    pub fn validate(&self) -> Result<(usize, usize)> {
        match self {
            FunctionSpec::QuadraticForm { matrix, direction } => {
                if !matrix.is_symmetric() {
                    return Err(Error::invalid("quadratic-form matrix must be square and symmetric"));
                }
                Ok((matrix.rows(), direction.dim()))
            }
            FunctionSpec::PerturbedQuadratic {
                matrix,
                direction,
                c,
                r,
                perturbation_direction,
                norm,
            } => {
                if !matrix.is_symmetric() {
                    return Err(Error::invalid("quadratic-form matrix must be square and symmetric"));
                }
                if !c.is_finite() {
                    return Err(Error::NonFinite("perturbation coefficient c"));
                }
                if !(r.is_finite() && *r >= 0.0) {
                    return Err(Error::invalid(format!("perturbation exponent r must be >= 0, got {r}")));
                }
                if let Some(d) = perturbation_direction {
                    d.ensure_dim(direction.dim())?;
                }
                check_norm_dim(norm, matrix.rows())?;
                Ok((matrix.rows(), direction.dim()))
            }
            FunctionSpec::NormedAlgebra { x0 } => Ok((x0.dim(), x0.dim())),
            FunctionSpec::InnerProductFamily { a, x0, y0, z0, .. } => {
                y0.ensure_dim(x0.dim())?;
                z0.ensure_dim(x0.dim())?;
                Ok((a.dim(), x0.dim()))
            }
            FunctionSpec::LinearMap { matrix } => Ok((matrix.cols(), matrix.rows())),
            FunctionSpec::ScalarPolynomial { coeffs, direction } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::invalid("polynomial needs finite coefficients"));
                }
                Ok((1, direction.dim()))
            }
            FunctionSpec::Sum { terms } => {
                let first = terms
                    .first()
                    .ok_or_else(|| Error::invalid("sum needs at least one term"))?
                    .validate()?;
                for t in &terms[1..] {
                    let dims = t.validate()?;
                    if dims != first {
                        return Err(Error::invalid(format!(
                            "sum terms disagree on dimensions: {first:?} vs {dims:?}"
                        )));
                    }
                }
                Ok(first)
            }
        }
    }

    fn dims(&self) -> (usize, usize) {
        match self {
            FunctionSpec::QuadraticForm { matrix, direction }
            | FunctionSpec::PerturbedQuadratic {
                matrix, direction, ..
            } => (matrix.rows(), direction.dim()),
            FunctionSpec::NormedAlgebra { x0 } => (x0.dim(), x0.dim()),
            FunctionSpec::InnerProductFamily { a, x0, .. } => (a.dim(), x0.dim()),
            FunctionSpec::LinearMap { matrix } => (matrix.cols(), matrix.rows()),
            FunctionSpec::ScalarPolynomial { direction, .. } => (1, direction.dim()),
            FunctionSpec::Sum { terms } => terms.first().map_or((0, 0), FunctionSpec::dims),
        }
    }

    fn eval_raw(&self, x: &Vector) -> Vec<f64> {
        let xs = x.as_slice();
        match self {
            FunctionSpec::QuadraticForm { matrix, direction } => {
                let q = matrix.quadratic_form(xs);
                direction.as_slice().iter().map(|d| q * d).collect()
            }
            FunctionSpec::PerturbedQuadratic {
                matrix,
                direction,
                c,
                r,
                perturbation_direction,
                norm,
            } => {
                let q = matrix.quadratic_form(xs);
                let pert = c * norm_of(norm, xs).powf(*r);
                let pd = perturbation_direction.as_ref().unwrap_or(direction);
                direction
                    .as_slice()
                    .iter()
                    .zip(pd.as_slice())
                    .map(|(d, e)| q * d + pert * e)
                    .collect()
            }
            FunctionSpec::NormedAlgebra { x0 } => {
                let n = x.max_abs();
                xs.iter()
                    .zip(x0.as_slice())
                    .map(|(xi, e)| xi * xi + n * e)
                    .collect()
            }
            FunctionSpec::InnerProductFamily {
                a,
                x0,
                y0,
                z0,
                variant,
            } => {
                let ip = x.dot(a);
                let sq: f64 = xs.iter().map(|c| c * c).sum();
                let root = sq.sqrt().sqrt();
                let (lin, quad, rt) = match variant {
                    InnerProductVariant::F => (ip, sq, root),
                    InnerProductVariant::G => (ip, sq, 0.0),
                    InnerProductVariant::H => (0.0, sq, root),
                };
                x0.as_slice()
                    .iter()
                    .zip(y0.as_slice())
                    .zip(z0.as_slice())
                    .map(|((u, v), w)| lin * u + quad * v + rt * w)
                    .collect()
            }
            FunctionSpec::LinearMap { matrix } => matrix.apply(xs),
            FunctionSpec::ScalarPolynomial { coeffs, direction } => {
                let t = xs[0];
                let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
                direction.as_slice().iter().map(|d| p * d).collect()
            }
            FunctionSpec::Sum { terms } => {
                let mut acc = vec![0.0; self.dims().1];
                for term in terms {
                    for (a, v) in acc.iter_mut().zip(term.eval_raw(x)) {
                        *a += v;
                    }
                }
                acc
            }
        }
    }
}

fn check_norm_dim(norm: &NormKind, dim: usize) -> Result<()> {
    if let NormKind::InnerProduct { matrix } = norm {
        crate::space::ClassicalNorm::new(dim, NormKind::InnerProduct { matrix: matrix.clone() })?;
    }
    Ok(())
}

impl VectorMap for FunctionSpec {
    fn domain_dim(&self) -> usize {
        self.dims().0
    }

    fn codomain_dim(&self) -> usize {
        self.dims().1
    }

    fn apply(&self, x: &Vector) -> Result<Vector> {
        x.ensure_dim(self.domain_dim())?;
        Vector::from_raw(self.eval_raw(x)).checked("function value")
    }
}

pub fn eval_function(f: &FunctionSpec, x: &Vector) -> Result<Vector> {
    f.apply(x)
}

/// `x ↦ (f(x) - f(-x)) / 2`.
#[derive(Debug, Clone)]
pub struct OddPart<F>(pub F);

/// `x ↦ (f(x) + f(-x)) / 2`.
#[derive(Debug, Clone)]
pub struct EvenPart<F>(pub F);

impl<F: VectorMap> VectorMap for OddPart<F> {
    fn domain_dim(&self) -> usize {
        self.0.domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        self.0.codomain_dim()
    }

    fn apply(&self, x: &Vector) -> Result<Vector> {
        let a = self.0.apply(x)?;
        let b = self.0.apply(&-x)?;
        Ok((&a - &b).scale(0.5))
    }
}

impl<F: VectorMap> VectorMap for EvenPart<F> {
    fn domain_dim(&self) -> usize {
        self.0.domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        self.0.codomain_dim()
    }

    fn apply(&self, x: &Vector) -> Result<Vector> {
        let a = self.0.apply(x)?;
        let b = self.0.apply(&-x)?;
        Ok((&a + &b).scale(0.5))
    }
}

/// A parity part of a sum, taken term by term so that a term of the opposite
/// parity contributes an exact zero instead of a rounding residue.
#[derive(Debug, Clone)]
struct TermwisePart {
    terms: Vec<FunctionSpec>,
    odd: bool,
}

impl VectorMap for TermwisePart {
    fn domain_dim(&self) -> usize {
        self.terms[0].domain_dim()
    }

    fn codomain_dim(&self) -> usize {
        self.terms[0].codomain_dim()
    }

    fn apply(&self, x: &Vector) -> Result<Vector> {
        let mut acc = Vector::zeros(self.codomain_dim());
        for term in &self.terms {
            let part = if self.odd {
                OddPart(term).apply(x)?
            } else {
                EvenPart(term).apply(x)?
            };
            acc = &acc + &part;
        }
        Ok(acc)
    }
}

fn flatten(f: &FunctionSpec, out: &mut Vec<FunctionSpec>) {
    match f {
        FunctionSpec::Sum { terms } => terms.iter().for_each(|t| flatten(t, out)),
        other => out.push(other.clone()),
    }
}

fn part(f: &FunctionSpec, odd: bool) -> EvaluatedFunction {
    match f {
        FunctionSpec::Sum { terms } if !terms.is_empty() => {
            let mut flat = Vec::new();
            flatten(f, &mut flat);
            Arc::new(TermwisePart { terms: flat, odd })
        }
        _ if odd => Arc::new(OddPart(f.clone())),
        _ => Arc::new(EvenPart(f.clone())),
    }
}

/// `(f(x) - f(-x)) / 2`, computed per term for sums.
pub fn odd_part(f: &FunctionSpec) -> EvaluatedFunction {
    part(f, true)
}

/// `(f(x) + f(-x)) / 2`, computed per term for sums.
pub fn even_part(f: &FunctionSpec) -> EvaluatedFunction {
    part(f, false)
}

/// `(f, g, h)` for `f(x+y) + f(x-y) = 2g(x) + 2h(y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTriple", into = "RawTriple")]
pub struct PexiderTriple {
    pub f: FunctionSpec,
    pub g: FunctionSpec,
    pub h: FunctionSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTriple {
    f: FunctionSpec,
    g: FunctionSpec,
    h: FunctionSpec,
}

impl TryFrom<RawTriple> for PexiderTriple {
    type Error = Error;

    fn try_from(r: RawTriple) -> Result<Self> {
        PexiderTriple::new(r.f, r.g, r.h)
    }
}

impl From<PexiderTriple> for RawTriple {
    fn from(t: PexiderTriple) -> Self {
        RawTriple {
            f: t.f,
            g: t.g,
            h: t.h,
        }
    }
}

impl PexiderTriple {
    pub fn new(f: FunctionSpec, g: FunctionSpec, h: FunctionSpec) -> Result<Self> {
        let df = f.validate()?;
        for other in [&g, &h] {
            let d = other.validate()?;
            if d != df {
                return Err(Error::invalid(format!(
                    "Pexider triple members disagree on dimensions: {df:?} vs {d:?}"
                )));
            }
        }
        Ok(PexiderTriple { f, g, h })
    }

    /// The same function in all three slots.
    pub fn diagonal(f: FunctionSpec) -> Result<Self> {
        Self::new(f.clone(), f.clone(), f)
    }

    /// The inner-product example's `(f, g, h)`.
    pub fn inner_product_family(a: Vector, x0: Vector, y0: Vector, z0: Vector) -> Result<Self> {
        let make = |variant| {
            FunctionSpec::inner_product_family(a.clone(), x0.clone(), y0.clone(), z0.clone(), variant)
        };
        Self::new(
            make(InnerProductVariant::F)?,
            make(InnerProductVariant::G)?,
            make(InnerProductVariant::H)?,
        )
    }

    pub fn domain_dim(&self) -> usize {
        self.f.domain_dim()
    }

    pub fn codomain_dim(&self) -> usize {
        self.f.codomain_dim()
    }
}
