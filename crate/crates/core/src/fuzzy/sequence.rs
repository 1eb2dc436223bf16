use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{FuzzyNorm, TGrid};
use crate::error::{Error, Result};
use crate::space::Vector;

type Generator = Arc<dyn Fn(usize) -> Vector + Send + Sync>;

/// A finite prefix `x_0, x_1, …, x_{len-1}` of a vector sequence.
#[derive(Clone)]
pub enum SequenceSpec {
    Finite(Vec<Vector>),
    Generated { len: usize, generator: Generator },
}

impl SequenceSpec {
    pub fn generated(len: usize, f: impl Fn(usize) -> Vector + Send + Sync + 'static) -> Self {
        SequenceSpec::Generated {
            len,
            generator: Arc::new(f),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SequenceSpec::Finite(v) => v.len(),
            SequenceSpec::Generated { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: usize) -> Vector {
        match self {
            SequenceSpec::Finite(v) => v[n].clone(),
            SequenceSpec::Generated { generator, .. } => generator(n),
        }
    }

    fn materialize(&self, dim: usize) -> Result<Vec<Vector>> {
        (0..self.len())
            .map(|n| {
                let x = self.get(n);
                x.ensure_dim(dim)?;
                Ok(x)
            })
            .collect()
    }
}

impl fmt::Debug for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Finite(v) => f.debug_tuple("Finite").field(&v.len()).finish(),
            SequenceSpec::Generated { len, .. } => {
                f.debug_struct("Generated").field("len", len).finish()
            }
        }
    }
}

/// The smallest membership observed, with where it occurred. For Cauchy
/// checks `p` is the look-ahead distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstPoint {
    pub n: usize,
    pub p: Option<usize>,
    pub t: f64,
    pub membership: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceVerdict {
    pub converged: bool,
    pub worst: WorstPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyVerdict {
    pub cauchy: bool,
    /// Smallest index from which every checked `(n, p, t)` clears `1 - eps`.
    pub n0: Option<usize>,
    pub worst: WorstPoint,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")))
    }
}

/// Decides `N-lim x_n = limit` on the available prefix: every one of the last
/// `window` terms must satisfy `N(x_n - limit, t) > 1 - eps` at every grid level.
pub fn fuzzy_converged(
    seq: &SequenceSpec,
    limit: &Vector,
    fuzzy: &FuzzyNorm,
    grid: &TGrid,
    eps: f64,
    window: usize,
) -> Result<ConvergenceVerdict> {
    check_eps(eps)?;
    if window == 0 {
        return Err(Error::invalid("window must be at least 1"));
    }
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    limit.ensure_dim(fuzzy.dim())?;
    let len = seq.len();
    let start = len.saturating_sub(window);
    let mut worst: Option<WorstPoint> = None;
    for n in start..len {
        let x = seq.get(n);
        x.ensure_dim(fuzzy.dim())?;
        let norm = fuzzy.base().norm_unchecked(&(&x - limit));
        for &t in grid.values() {
            let m = fuzzy.membership_of_norm(norm, t);
            if worst.is_none_or(|w| m < w.membership) {
                worst = Some(WorstPoint {
                    n,
                    p: None,
                    t,
                    membership: m,
                });
            }
        }
    }
    let worst = worst.expect("window and grid are nonempty");
    Ok(ConvergenceVerdict {
        converged: worst.membership > 1.0 - eps,
        worst,
    })
}

/// Decides fuzzy Cauchyness on the available prefix with look-ahead
/// `p ∈ 1..=p_max`. Only indices with the full look-ahead inside the prefix
/// are tested; the sequence is Cauchy when some `n0` among them has every
/// later tested index clear `1 - eps` at every grid level.
pub fn fuzzy_cauchy(
    seq: &SequenceSpec,
    fuzzy: &FuzzyNorm,
    grid: &TGrid,
    eps: f64,
    p_max: usize,
) -> Result<CauchyVerdict> {
    check_eps(eps)?;
    if p_max == 0 {
        return Err(Error::invalid("p_max must be at least 1"));
    }
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let xs = seq.materialize(fuzzy.dim())?;
    if xs.len() <= p_max {
        return Err(Error::invalid(format!(
            "sequence of length {} is too short for look-ahead {p_max}",
            xs.len()
        )));
    }
    let last_tested = xs.len() - 1 - p_max;
    let t_min = grid.values()[0];
    let mut worst: Option<WorstPoint> = None;
    // Scan backwards; n0 is one past the last failing index.
    let mut n0 = Some(0);
    for n in (0..=last_tested).rev() {
        let mut ok = true;
        for p in 1..=p_max {
            let norm = fuzzy.base().norm_unchecked(&(&xs[n + p] - &xs[n]));
            for &t in grid.values() {
                let m = fuzzy.membership_of_norm(norm, t);
                if worst.is_none_or(|w| m < w.membership) {
                    worst = Some(WorstPoint {
                        n,
                        p: Some(p),
                        t,
                        membership: m,
                    });
                }
                if m <= 1.0 - eps {
                    ok = false;
                }
            }
        }
        if !ok && n0.is_some_and(|k| k <= n) {
            n0 = if n == last_tested { None } else { Some(n + 1) };
        }
    }
    let worst = worst.unwrap_or(WorstPoint {
        n: 0,
        p: None,
        t: t_min,
        membership: 1.0,
    });
    Ok(CauchyVerdict {
        cauchy: n0.is_some(),
        n0,
        worst,
    })
}
