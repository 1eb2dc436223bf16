use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{norm_of, NormKind, Vector};

/// Ratios with |φ(x, y)| at or below this are excluded from α estimation.
pub const DEGENERATE_PHI: f64 = 1e-9;

fn default_l2() -> NormKind {
    NormKind::L2
}

/// A scalar control function φ: X × X → ℝ with `φ(2x, 2y) = α φ(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ControlFunction {
    /// `(√‖x+y‖ + √‖x−y‖ − 2√‖y‖) · z0_norm` on Euclidean space; α = √2.
    SqrtPexider { z0_norm: f64 },
    /// `(√‖x+y‖ + √‖x−y‖ − 2√‖x‖ − 2√‖y‖) · z0_norm`, the exact quadratic
    /// defect magnitude of the square-root term; α = √2.
    SqrtDefect { z0_norm: f64 },
    /// `‖x‖ᵖ + ‖y‖ᵖ`; α = 2ᵖ.
    PowerSum {
        p: f64,
        #[serde(default = "default_l2")]
        norm: NormKind,
    },
    /// `scale · base(x, y)`; α is the base's.
    Scaled {
        base: Box<ControlFunction>,
        scale: f64,
    },
}

impl ControlFunction {
    pub fn sqrt_pexider(z0_norm: f64) -> Result<Self> {
        let phi = ControlFunction::SqrtPexider { z0_norm };
        phi.validate()?;
        Ok(phi)
    }

    pub fn power_sum(p: f64) -> Result<Self> {
        let phi = ControlFunction::PowerSum {
            p,
            norm: NormKind::L2,
        };
        phi.validate()?;
        Ok(phi)
    }

    pub fn scaled(self, scale: f64) -> Result<Self> {
        let phi = ControlFunction::Scaled {
            base: Box::new(self),
            scale,
        };
        phi.validate()?;
        Ok(phi)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ControlFunction::SqrtPexider { z0_norm } | ControlFunction::SqrtDefect { z0_norm } => {
                if z0_norm.is_finite() && *z0_norm > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid(format!("z0_norm must be positive, got {z0_norm}")))
                }
            }
            ControlFunction::PowerSum { p, .. } => {
                if p.is_finite() && *p >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid(format!("power-sum exponent p must be >= 0, got {p}")))
                }
            }
            ControlFunction::Scaled { base, scale } => {
                if !scale.is_finite() {
                    return Err(Error::NonFinite("control scale"));
                }
                base.validate()
            }
        }
    }

    /// The homogeneity factor α.
    pub fn alpha(&self) -> f64 {
        match self {
            ControlFunction::SqrtPexider { .. } | ControlFunction::SqrtDefect { .. } => {
                std::f64::consts::SQRT_2
            }
            ControlFunction::PowerSum { p, .. } => 2f64.powf(*p),
            ControlFunction::Scaled { base, .. } => base.alpha(),
        }
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> Result<f64> {
        y.ensure_dim(x.dim())?;
        if let ControlFunction::PowerSum {
            norm: NormKind::InnerProduct { matrix },
            ..
        } = self
        {
            if matrix.len() != x.dim() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.len(),
                    found: x.dim(),
                });
            }
        }
        Ok(self.eval_raw(x, y))
    }

    fn eval_raw(&self, x: &Vector, y: &Vector) -> f64 {
        let euclid = |v: &Vector| v.dot(v).sqrt();
        match self {
            ControlFunction::SqrtPexider { z0_norm } => {
                let s = euclid(&(x + y)).sqrt() + euclid(&(x - y)).sqrt() - 2.0 * euclid(y).sqrt();
                s * z0_norm
            }
            ControlFunction::SqrtDefect { z0_norm } => {
                let s = euclid(&(x + y)).sqrt() + euclid(&(x - y)).sqrt()
                    - 2.0 * euclid(x).sqrt()
                    - 2.0 * euclid(y).sqrt();
                s * z0_norm
            }
            ControlFunction::PowerSum { p, norm } => {
                norm_of(norm, x.as_slice()).powf(*p) + norm_of(norm, y.as_slice()).powf(*p)
            }
            ControlFunction::Scaled { base, scale } => scale * base.eval_raw(x, y),
        }
    }
}

pub fn eval_phi(phi: &ControlFunction, x: &Vector, y: &Vector) -> Result<f64> {
    phi.eval(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaEstimate {
    /// Mean of `φ(2x, 2y) / φ(x, y)` over non-degenerate samples.
    pub alpha: f64,
    /// Largest `|ratio − alpha| / |alpha|` over those samples.
    pub max_residual: f64,
    pub used: usize,
}

pub fn estimate_alpha(phi: &ControlFunction, samples: &[(Vector, Vector)]) -> Result<AlphaEstimate> {
    let mut ratios = Vec::with_capacity(samples.len());
    for (x, y) in samples {
        let base = phi.eval(x, y)?;
        if base.abs() <= DEGENERATE_PHI {
            continue;
        }
        let doubled = phi.eval(&x.scale(2.0), &y.scale(2.0))?;
        ratios.push(doubled / base);
    }
    if ratios.is_empty() {
        return Err(Error::Degenerate(format!(
            "|phi(x, y)| <= {DEGENERATE_PHI:e} on all {} samples",
            samples.len()
        )));
    }
    let alpha = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let max_residual = ratios
        .iter()
        .map(|r| (r - alpha).abs() / alpha.abs())
        .fold(0.0, f64::max);
    Ok(AlphaEstimate {
        alpha,
        max_residual,
        used: ratios.len(),
    })
}
