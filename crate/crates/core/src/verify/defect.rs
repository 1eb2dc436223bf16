use super::{collect, ReportRow, SampleRows, StabilityReport, Sweep};
use crate::catalog::{ControlFunction, PexiderTriple, VectorMap};
use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNorm, MembershipValue};
use crate::space::Vector;

/// `f(x+y) + f(x-y) - 2f(x) - 2f(y)`.
pub fn quadratic_defect<F: VectorMap + ?Sized>(f: &F, x: &Vector, y: &Vector) -> Result<Vector> {
    pexider_defect_of(f, f, f, x, y)
}

/// `f(x+y) + f(x-y) - 2g(x) - 2h(y)`.
pub fn pexider_defect(trip: &PexiderTriple, x: &Vector, y: &Vector) -> Result<Vector> {
    pexider_defect_of(&trip.f, &trip.g, &trip.h, x, y)
}

pub(crate) fn pexider_defect_of<F, G, H>(f: &F, g: &G, h: &H, x: &Vector, y: &Vector) -> Result<Vector>
where
    F: VectorMap + ?Sized,
    G: VectorMap + ?Sized,
    H: VectorMap + ?Sized,
{
    x.ensure_dim(f.domain_dim())?;
    y.ensure_dim(f.domain_dim())?;
    let sum = &f.apply(&(x + y))? + &f.apply(&(x - y))?;
    let twice = &g.apply(x)?.scale(2.0) + &h.apply(y)?.scale(2.0);
    Ok(&sum - &twice)
}

fn check_scalar_norm(fn_z: &FuzzyNorm) -> Result<()> {
    if fn_z.dim() == 1 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: 1,
            found: fn_z.dim(),
        })
    }
}

fn min_membership(phi: &ControlFunction, fn_z: &FuzzyNorm, pairs: &[(&Vector, &Vector)], t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::NonFinite("membership level t"));
    }
    check_scalar_norm(fn_z)?;
    let mut m = 1.0f64;
    for (a, b) in pairs {
        m = m.min(fn_z.membership_of_scalar(phi.eval(a, b)?, t / 3.0));
    }
    Ok(m)
}

/// `min{N'(φ(x,x), t/3), N'(φ(x,0), t/3), N'(φ(0,x), t/3)}`.
pub fn three_point_bound(phi: &ControlFunction, fn_z: &FuzzyNorm, x: &Vector, t: f64) -> Result<MembershipValue> {
    let zero = Vector::zeros(x.dim());
    let m = min_membership(phi, fn_z, &[(x, x), (x, &zero), (&zero, x)], t)?;
    MembershipValue::new(m)
}

/// [`three_point_bound`] extended by the same three terms at `-x`.
pub fn six_point_bound(phi: &ControlFunction, fn_z: &FuzzyNorm, x: &Vector, t: f64) -> Result<MembershipValue> {
    let zero = Vector::zeros(x.dim());
    let nx = -x;
    let m = min_membership(
        phi,
        fn_z,
        &[(x, x), (&nx, &nx), (x, &zero), (&zero, x), (&nx, &zero), (&zero, &nx)],
        t,
    )?;
    MembershipValue::new(m)
}

/// Checks `N_Y(defect(x, y), t + s) ≥ min{N_X(x, tᵠ), N_X(y, sᵠ)}` for every
/// sample pair and every `(s, t)` in `levels[x_id]`.
pub fn check_q_almost<F: VectorMap + ?Sized>(
    f: &F,
    fn_x: &FuzzyNorm,
    fn_y: &FuzzyNorm,
    q: f64,
    sweep: &Sweep,
    levels: &[Vec<(f64, f64)>],
) -> Result<StabilityReport> {
    if !(q.is_finite() && q > 0.0 && q != 0.5) {
        return Err(Error::invalid(format!("q must be positive and differ from 1/2, got {q}")));
    }
    if levels.len() != sweep.samples.len() {
        return Err(Error::invalid("one (s, t) level list is needed per sample"));
    }
    check_dims(f, fn_x, fn_y)?;
    sweep.ensure_dim(f.domain_dim())?;
    let reports = collect(vec![StabilityReport::new("q-almost")], sweep.samples.len(), |i| {
        let (x, y) = (&sweep.samples[i], &sweep.partners[i]);
        let defect = quadratic_defect(f, x, y)?;
        let d = fn_y.base().norm_unchecked(&defect);
        let (nx, ny) = (fn_x.base().norm_unchecked(x), fn_x.base().norm_unchecked(y));
        let rows = levels[i]
            .iter()
            .map(|&(s, t)| {
                let lhs = fn_y.membership_of_norm(d, t + s);
                let rhs = fn_x
                    .membership_of_norm(nx, t.powf(q))
                    .min(fn_x.membership_of_norm(ny, s.powf(q)));
                ReportRow::new(i, t, Some(s), lhs, rhs)
            })
            .collect();
        Ok(Some(vec![SampleRows {
            residual: Some(d),
            rows,
        }]))
    })?;
    Ok(reports.into_iter().next().expect("one report"))
}

/// Checks `N_Y(f(x+y) + f(x-y) - 2g(x) - 2h(y), t) ≥ N_Z(φ(x, y), t)` on the
/// sample pairs and grid levels.
pub fn check_control_bounded(
    trip: &PexiderTriple,
    phi: &ControlFunction,
    fn_y: &FuzzyNorm,
    fn_z: &FuzzyNorm,
    sweep: &Sweep,
) -> Result<StabilityReport> {
    phi.validate()?;
    check_scalar_norm(fn_z)?;
    if fn_y.dim() != trip.codomain_dim() {
        return Err(Error::DimensionMismatch {
            expected: trip.codomain_dim(),
            found: fn_y.dim(),
        });
    }
    sweep.ensure_dim(trip.domain_dim())?;
    let reports = collect(vec![StabilityReport::new("control-bounded")], sweep.samples.len(), |i| {
        let (x, y) = (&sweep.samples[i], &sweep.partners[i]);
        let d = fn_y.base().norm_unchecked(&pexider_defect(trip, x, y)?);
        let v = phi.eval(x, y)?;
        let rows = sweep
            .grid
            .values()
            .iter()
            .map(|&t| {
                ReportRow::new(i, t, None, fn_y.membership_of_norm(d, t), fn_z.membership_of_scalar(v, t))
            })
            .collect();
        Ok(Some(vec![SampleRows {
            residual: Some(d),
            rows,
        }]))
    })?;
    Ok(reports.into_iter().next().expect("one report"))
}

pub(crate) fn check_dims<F: VectorMap + ?Sized>(f: &F, fn_x: &FuzzyNorm, fn_y: &FuzzyNorm) -> Result<()> {
    for (expected, found) in [(f.domain_dim(), fn_x.dim()), (f.codomain_dim(), fn_y.dim())] {
        if expected != found {
            return Err(Error::DimensionMismatch { expected, found });
        }
    }
    Ok(())
}
