//! Finite-dimensional real vectors and the crisp norms fuzzy norms are built from.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of ℝᵈ with d ≥ 1 and finite components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("vector dimension must be at least 1"));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("vector components"));
        }
        Ok(Vector(components))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector dimension must be at least 1");
        Vector(vec![0.0; dim])
    }

    pub fn scalar(value: f64) -> Result<Self> {
        Self::new(vec![value])
    }

    /// The i-th standard basis vector of ℝᵈ.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = 1.0;
        v
    }

    /// Wraps raw components produced by arithmetic on valid vectors. Callers
    /// that can produce non-finite values go through [`Vector::checked`].
    pub(crate) fn from_raw(components: Vec<f64>) -> Self {
        debug_assert!(!components.is_empty());
        Vector(components)
    }

    pub(crate) fn checked(self, what: &'static str) -> Result<Self> {
        if self.0.iter().all(|c| c.is_finite()) {
            Ok(self)
        } else {
            Err(Error::NonFinite(what))
        }
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn scale(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|v| c * v).collect())
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Componentwise product, the multiplication of the algebra ℝᵈ.
    pub fn hadamard(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Exact bit pattern, used as a memoization key.
    pub fn bit_key(&self) -> Vec<u64> {
        self.0.iter().map(|c| c.to_bits()).collect()
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Vector::new(value)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

/// Which crisp norm to use on ℝᵈ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormKind {
    L1,
    L2,
    #[serde(rename = "linf")]
    LInf,
    /// ‖x‖ = √(xᵀAx) for a symmetric positive-definite A.
    InnerProduct { matrix: Vec<Vec<f64>> },
}

/// A crisp norm on ℝᵈ with its dimension fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalNorm {
    dim: usize,
    kind: NormKind,
}

impl ClassicalNorm {
    pub fn new(dim: usize, kind: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("norm dimension must be at least 1"));
        }
        if let NormKind::InnerProduct { matrix } = &kind {
            validate_spd(matrix, dim)?;
        }
        Ok(ClassicalNorm { dim, kind })
    }

    pub fn l1(dim: usize) -> Self {
        Self::new(dim, NormKind::L1).expect("dim >= 1")
    }

    pub fn l2(dim: usize) -> Self {
        Self::new(dim, NormKind::L2).expect("dim >= 1")
    }

    pub fn linf(dim: usize) -> Self {
        Self::new(dim, NormKind::LInf).expect("dim >= 1")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn norm(&self, x: &Vector) -> Result<f64> {
        x.ensure_dim(self.dim)?;
        Ok(norm_of(&self.kind, x.as_slice()))
    }

    /// Same as [`ClassicalNorm::norm`] for callers that already checked the dimension.
    pub(crate) fn norm_unchecked(&self, x: &Vector) -> f64 {
        debug_assert_eq!(x.dim(), self.dim);
        norm_of(&self.kind, x.as_slice())
    }
}

/// Evaluates a norm of the given kind on raw components. The inner-product
/// kind reads `matrix` with the dimension of `x`.
pub fn norm_of(kind: &NormKind, x: &[f64]) -> f64 {
    match kind {
        NormKind::L1 => x.iter().map(|c| c.abs()).sum(),
        NormKind::L2 => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
        NormKind::LInf => x.iter().fold(0.0, |m, c| m.max(c.abs())),
        NormKind::InnerProduct { matrix } => {
            let q: f64 = matrix
                .iter()
                .zip(x)
                .map(|(row, xi)| xi * row.iter().zip(x).map(|(a, xj)| a * xj).sum::<f64>())
                .sum();
            q.max(0.0).sqrt()
        }
    }
}

#[allow(clippy::needless_range_loop)]
fn validate_spd(matrix: &[Vec<f64>], dim: usize) -> Result<()> {
    if matrix.len() != dim || matrix.iter().any(|row| row.len() != dim) {
        return Err(Error::invalid(format!(
            "inner-product matrix must be {dim}x{dim}"
        )));
    }
    for i in 0..dim {
        for j in 0..dim {
            let (a, b) = (matrix[i][j], matrix[j][i]);
            if !a.is_finite() || (a - b).abs() > 1e-12 * (1.0 + a.abs()) {
                return Err(Error::invalid("inner-product matrix must be symmetric"));
            }
        }
    }
    // Cholesky; a non-positive pivot means the matrix is not positive definite.
    let mut l = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = matrix[i][i] - s;
                if d <= 0.0 {
                    return Err(Error::invalid(
                        "inner-product matrix must be positive definite",
                    ));
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (matrix[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Vector::new(vec![]).is_err());
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn catalog_norms() {
        let x = v(&[3.0, -4.0]);
        assert_eq!(ClassicalNorm::l1(2).norm(&x).unwrap(), 7.0);
        assert_eq!(ClassicalNorm::l2(2).norm(&x).unwrap(), 5.0);
        assert_eq!(ClassicalNorm::linf(2).norm(&x).unwrap(), 4.0);
        let ip = ClassicalNorm::new(
            2,
            NormKind::InnerProduct {
                matrix: vec![vec![2.0, 0.0], vec![0.0, 1.0]],
            },
        )
        .unwrap();
        assert!((ip.norm(&x).unwrap() - 34f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = ClassicalNorm::l2(3).norm(&v(&[1.0])).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 3,
                found: 1
            }
        ));
    }

    #[test]
    fn rejects_indefinite_matrix() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(ClassicalNorm::new(2, NormKind::InnerProduct { matrix: m }).is_err());
        let asym = vec![vec![1.0, 0.5], vec![0.0, 1.0]];
        assert!(ClassicalNorm::new(2, NormKind::InnerProduct { matrix: asym }).is_err());
    }

    #[test]
    fn serde_rejects_nan_components() {
        let r: std::result::Result<Vector, _> = serde_json::from_str("[]");
        assert!(r.is_err());
        let ok: Vector = serde_json::from_str("[1.0, 2.5]").unwrap();
        assert_eq!(ok.as_slice(), &[1.0, 2.5]);
    }
}
