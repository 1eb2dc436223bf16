use serde::Serialize;

use crate::error::{Error, Result};

/// A named scalar multiplying `t` inside an approximation guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityConstant {
    pub name: &'static str,
    pub value: f64,
    pub validity: &'static str,
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.5 {
        Ok(())
    } else {
        Err(Error::invalid(format!("q must exceed 1/2, got {q}")))
    }
}

fn check_alpha(alpha: f64, upper: f64) -> Result<f64> {
    let a = alpha.abs();
    if a > 0.0 && a < upper {
        Ok(a)
    } else {
        Err(Error::invalid(format!("|alpha| must lie in (0, {upper}), got {alpha}")))
    }
}

/// `((2^{2-1/q} - 1) / 4)^q`.
pub fn quadratic_bound_constant(q: f64) -> Result<StabilityConstant> {
    check_q(q)?;
    let p = 1.0 / q;
    Ok(StabilityConstant {
        name: "quadratic-bound",
        value: ((2f64.powf(2.0 - p) - 1.0) / 4.0).powf(q),
        validity: "q > 1/2",
    })
}

/// `((2^{2-1/q} - 1) / 2)^q`, twice the base of [`quadratic_bound_constant`].
pub fn sharp_quadratic_bound_constant(q: f64) -> Result<StabilityConstant> {
    check_q(q)?;
    let p = 1.0 / q;
    Ok(StabilityConstant {
        name: "sharp-quadratic-bound",
        value: ((2f64.powf(2.0 - p) - 1.0) / 2.0).powf(q),
        validity: "q > 1/2",
    })
}

/// `(2 - |α|)/4` for `f` and `(6 - 3|α|)/(14 - |α|)` for `g + h`.
pub fn odd_pexider_constants(alpha: f64) -> Result<(StabilityConstant, StabilityConstant)> {
    let a = check_alpha(alpha, 2.0)?;
    let validity = "0 < |alpha| < 2";
    Ok((
        StabilityConstant {
            name: "odd-f",
            value: (2.0 - a) / 4.0,
            validity,
        },
        StabilityConstant {
            name: "odd-gh",
            value: (6.0 - 3.0 * a) / (14.0 - a),
            validity,
        },
    ))
}

/// `(4 - |α|)/16` for `f` and `(12 - 3|α|)/(52 - |α|)` for `g` and `h`.
pub fn even_pexider_constants(alpha: f64) -> Result<(StabilityConstant, StabilityConstant)> {
    let a = check_alpha(alpha, 4.0)?;
    let validity = "0 < |alpha| < 4";
    Ok((
        StabilityConstant {
            name: "even-f",
            value: (4.0 - a) / 16.0,
            validity,
        },
        StabilityConstant {
            name: "even-gh",
            value: (12.0 - 3.0 * a) / (52.0 - a),
            validity,
        },
    ))
}

/// `min{(2 - |α|)/8, (4 - |α|)/32}`.
pub fn decomposition_constant(alpha: f64) -> Result<StabilityConstant> {
    let a = check_alpha(alpha, 2.0)?;
    Ok(StabilityConstant {
        name: "decomposition",
        value: ((2.0 - a) / 8.0).min((4.0 - a) / 32.0),
        validity: "0 < |alpha| < 2",
    })
}

/// The preset `C = 4 / (2^{2-p} - 1)` for the classical bound `‖Q(x) - f(x)‖ ≤ C‖x‖ᵖ`.
/// Positive only for `p < 2`.
pub fn classical_constant(p: f64) -> Result<StabilityConstant> {
    if !p.is_finite() || p < 0.0 {
        return Err(Error::invalid(format!("p must be a finite value >= 0, got {p}")));
    }
    let denom = 2f64.powf(2.0 - p) - 1.0;
    if denom == 0.0 {
        return Err(Error::invalid("constant undefined: 2^(2-p) - 1 = 0 at p = 2"));
    }
    let value = 4.0 / denom;
    if value <= 0.0 {
        return Err(Error::invalid(format!(
            "constant nonpositive: 4/(2^(2-p)-1) = {value} at p = {p}; the preset needs p < 2"
        )));
    }
    Ok(StabilityConstant {
        name: "classical",
        value,
        validity: "0 <= p < 2",
    })
}
