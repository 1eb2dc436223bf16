use std::sync::Arc;

use super::defect::{check_dims, pexider_defect_of};
use super::{
    classical_constant, collect, converged, decomposition_constant, even_pexider_constants,
    odd_pexider_constants, quadratic_bound_constant, sharp_quadratic_bound_constant,
    six_point_bound, three_point_bound, ReportRow, SampleRows, StabilityReport, Sweep,
};
use crate::catalog::{
    even_part, odd_part, ControlFunction, EvaluatedFunction, EvenPart, FunctionSpec, OddPart,
    PexiderTriple, VectorMap,
};
use crate::error::{Error, Result};
use crate::fuzzy::FuzzyNorm;
use crate::hyers::{Approximant, IterationKind};
use crate::space::{ClassicalNorm, Vector};

/// Values at the origin above this count as nonzero.
const ORIGIN_TOLERANCE: f64 = 1e-12;

fn approximant(
    source: EvaluatedFunction,
    iteration: IterationKind,
    fn_y: &FuzzyNorm,
    sweep: &Sweep,
) -> Result<Approximant> {
    Approximant::new(source, iteration, fn_y.clone(), sweep.grid.clone(), sweep.options)
}

fn grid_rows(
    x_id: usize,
    sweep: &Sweep,
    fn_y: &FuzzyNorm,
    residual: f64,
    mut rhs: impl FnMut(f64) -> Result<f64>,
) -> Result<SampleRows> {
    let rows = sweep
        .grid
        .values()
        .iter()
        .map(|&t| Ok(ReportRow::new(x_id, t, None, fn_y.membership_of_norm(residual, t), rhs(t)?)))
        .collect::<Result<_>>()?;
    Ok(SampleRows {
        residual: Some(residual),
        rows,
    })
}

fn check_origin<F: VectorMap + ?Sized>(f: &F, what: &str) -> Result<()> {
    let v = f.apply(&Vector::zeros(f.domain_dim()))?;
    if v.max_abs() > ORIGIN_TOLERANCE {
        return Err(Error::invalid(format!(
            "{what} must vanish at the origin, got max |value| = {:e}",
            v.max_abs()
        )));
    }
    Ok(())
}

fn scalar_dim(fn_z: &FuzzyNorm) -> Result<()> {
    if fn_z.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: fn_z.dim(),
        });
    }
    Ok(())
}

/// Builds `Q` by the direct quadratic iteration and checks
/// `N_Y(Q(x) - f(x), t) ≥ N_X(x, c tᵠ)` with the standard and the sharp constant.
/// Returns the two reports in that order.
pub fn verify_quadratic_stability(
    f: &FunctionSpec,
    fn_x: &FuzzyNorm,
    fn_y: &FuzzyNorm,
    q: f64,
    sweep: &Sweep,
) -> Result<Vec<StabilityReport>> {
    let c = quadratic_bound_constant(q)?.value;
    let c_sharp = sharp_quadratic_bound_constant(q)?.value;
    f.validate()?;
    check_dims(f, fn_x, fn_y)?;
    sweep.ensure_dim(f.domain_dim())?;
    let big_q = approximant(Arc::new(f.clone()), IterationKind::DirectQuadratic, fn_y, sweep)?;
    let reports = vec![
        StabilityReport::new("quadratic-bound").with_constant(c),
        StabilityReport::new("sharp-quadratic-bound").with_constant(c_sharp),
    ];
    collect(reports, sweep.samples.len(), |i| {
        let x = &sweep.samples[i];
        let Some(qx) = converged(big_q.eval(x))? else {
            return Ok(None);
        };
        let residual = fn_y.base().norm_unchecked(&(&qx - &f.apply(x)?));
        let nx = fn_x.base().norm_unchecked(x);
        let parts = [c, c_sharp]
            .iter()
            .map(|&c| grid_rows(i, sweep, fn_y, residual, |t| Ok(fn_x.membership_of_norm(nx, c * t.powf(q)))))
            .collect::<Result<_>>()?;
        Ok(Some(parts))
    })
}

/// Replaces the triple by its odd parts, builds `T` from `f°` by the direct
/// additive iteration and checks `N(f°(x) - T(x), t) ≥ N″(x, c₁t)` and
/// `N(g°(x) + h°(x) - T(x), t) ≥ N″(x, c₂t)`.
pub fn verify_odd_pexider(
    trip: &PexiderTriple,
    phi: &ControlFunction,
    fn_y: &FuzzyNorm,
    fn_z: &FuzzyNorm,
    sweep: &Sweep,
) -> Result<Vec<StabilityReport>> {
    let (c1, c2) = odd_pexider_constants(phi.alpha())?;
    let (c1, c2) = (c1.value, c2.value);
    phi.validate()?;
    scalar_dim(fn_z)?;
    check_dims(&trip.f, &FuzzyNorm::crisp(ClassicalNorm::l2(trip.domain_dim())), fn_y)?;
    sweep.ensure_dim(trip.domain_dim())?;
    let f_odd = odd_part(&trip.f);
    let (g_odd, h_odd) = (OddPart(&trip.g), OddPart(&trip.h));
    let t_map = approximant(f_odd.clone(), IterationKind::DirectAdditive, fn_y, sweep)?;
    let reports = vec![
        StabilityReport::new("odd-f").with_constant(c1),
        StabilityReport::new("odd-gh").with_constant(c2),
    ];
    collect(reports, sweep.samples.len(), |i| {
        let x = &sweep.samples[i];
        let Some(tx) = converged(t_map.eval(x))? else {
            return Ok(None);
        };
        let r_f = fn_y.base().norm_unchecked(&(&f_odd.apply(x)? - &tx));
        let gh = &g_odd.apply(x)? + &h_odd.apply(x)?;
        let r_gh = fn_y.base().norm_unchecked(&(&gh - &tx));
        let bound = |c: f64| move |t: f64| Ok(three_point_bound(phi, fn_z, x, c * t)?.value());
        Ok(Some(vec![
            grid_rows(i, sweep, fn_y, r_f, bound(c1))?,
            grid_rows(i, sweep, fn_y, r_gh, bound(c2))?,
        ]))
    })
}

/// Replaces the triple by its even parts, builds `Q` from `fᵉ` by the direct
/// quadratic iteration and checks `N(Q(x) - fᵉ(x), t) ≥ N″(x, c₁t)` and the
/// same with `gᵉ`, `hᵉ` against `c₂`.
pub fn verify_even_pexider(
    trip: &PexiderTriple,
    phi: &ControlFunction,
    fn_y: &FuzzyNorm,
    fn_z: &FuzzyNorm,
    sweep: &Sweep,
) -> Result<Vec<StabilityReport>> {
    let (c1, c2) = even_pexider_constants(phi.alpha())?;
    let (c1, c2) = (c1.value, c2.value);
    phi.validate()?;
    scalar_dim(fn_z)?;
    check_dims(&trip.f, &FuzzyNorm::crisp(ClassicalNorm::l2(trip.domain_dim())), fn_y)?;
    sweep.ensure_dim(trip.domain_dim())?;
    let f_even = even_part(&trip.f);
    let (g_even, h_even) = (EvenPart(&trip.g), EvenPart(&trip.h));
    check_origin(&*f_even, "even part of f")?;
    check_origin(&g_even, "even part of g")?;
    check_origin(&h_even, "even part of h")?;
    let q_map = approximant(f_even.clone(), IterationKind::DirectQuadratic, fn_y, sweep)?;
    let reports = vec![
        StabilityReport::new("even-f").with_constant(c1),
        StabilityReport::new("even-g").with_constant(c2),
        StabilityReport::new("even-h").with_constant(c2),
    ];
    collect(reports, sweep.samples.len(), |i| {
        let x = &sweep.samples[i];
        let Some(qx) = converged(q_map.eval(x))? else {
            return Ok(None);
        };
        let bound = |c: f64| move |t: f64| Ok(three_point_bound(phi, fn_z, x, c * t)?.value());
        let residual = |v: Vector| fn_y.base().norm_unchecked(&(&qx - &v));
        Ok(Some(vec![
            grid_rows(i, sweep, fn_y, residual(f_even.apply(x)?), bound(c1))?,
            grid_rows(i, sweep, fn_y, residual(g_even.apply(x)?), bound(c2))?,
            grid_rows(i, sweep, fn_y, residual(h_even.apply(x)?), bound(c2))?,
        ]))
    })
}

/// The additive part `T` (from `f°`) and quadratic part `Q` (from `fᵉ`) of `f`.
#[derive(Debug)]
pub struct Decomposition {
    pub additive: Approximant,
    pub quadratic: Approximant,
}

pub fn decompose(f: &FunctionSpec, fn_y: &FuzzyNorm, sweep: &Sweep) -> Result<Decomposition> {
    f.validate()?;
    Ok(Decomposition {
        additive: approximant(odd_part(f), IterationKind::DirectAdditive, fn_y, sweep)?,
        quadratic: approximant(even_part(f), IterationKind::DirectQuadratic, fn_y, sweep)?,
    })
}

/// Checks `N(f(x) - T(x) - Q(x), t) ≥ M(x, c t)` with `T`, `Q` from [`decompose`].
pub fn verify_decomposition(
    f: &FunctionSpec,
    phi: &ControlFunction,
    fn_y: &FuzzyNorm,
    fn_z: &FuzzyNorm,
    sweep: &Sweep,
) -> Result<StabilityReport> {
    let c = decomposition_constant(phi.alpha())?.value;
    phi.validate()?;
    scalar_dim(fn_z)?;
    check_dims(f, &FuzzyNorm::crisp(ClassicalNorm::l2(f.domain_dim())), fn_y)?;
    sweep.ensure_dim(f.domain_dim())?;
    check_origin(f, "f")?;
    let parts = decompose(f, fn_y, sweep)?;
    let (f_odd, f_even) = (odd_part(f), even_part(f));
    let reports = collect(vec![StabilityReport::new("decomposition").with_constant(c)], sweep.samples.len(), |i| {
        let x = &sweep.samples[i];
        let (Some(tx), Some(qx)) = (converged(parts.additive.eval(x))?, converged(parts.quadratic.eval(x))?) else {
            return Ok(None);
        };
        // f = f° + fᵉ exactly, so the residual is (f° - T) + (fᵉ - Q).
        let odd_gap = &f_odd.apply(x)? - &tx;
        let even_gap = &f_even.apply(x)? - &qx;
        let residual = fn_y.base().norm_unchecked(&(&odd_gap + &even_gap));
        let rows = grid_rows(i, sweep, fn_y, residual, |t| Ok(six_point_bound(phi, fn_z, x, c * t)?.value()))?;
        Ok(Some(vec![rows]))
    })?;
    Ok(reports.into_iter().next().expect("one report"))
}

/// Classical check through crisp fuzzy norms: first the hypothesis
/// `‖defect(x, y)‖ ≤ ‖x‖ᵖ + ‖y‖ᵖ` on the sample pairs, then
/// `‖Q(x) - f(x)‖ ≤ C‖x‖ᵖ`. `Q` uses the direct iteration for `p < 2` and the
/// dual one for `p > 2`. `None` for `c` selects the preset constant.
pub fn verify_classical(
    f: &FunctionSpec,
    p: f64,
    c: Option<f64>,
    norm_x: &ClassicalNorm,
    norm_y: &ClassicalNorm,
    sweep: &Sweep,
) -> Result<Vec<StabilityReport>> {
    if !(p.is_finite() && p >= 0.0) || p == 2.0 {
        return Err(Error::invalid(format!("p must be finite, >= 0 and differ from 2, got {p}")));
    }
    let c = match c {
        Some(c) if c.is_finite() && c > 0.0 => c,
        Some(c) => return Err(Error::invalid(format!("constant nonpositive: C = {c}"))),
        None => classical_constant(p)?.value,
    };
    f.validate()?;
    let (fn_x, fn_y) = (FuzzyNorm::crisp(norm_x.clone()), FuzzyNorm::crisp(norm_y.clone()));
    check_dims(f, &fn_x, &fn_y)?;
    sweep.ensure_dim(f.domain_dim())?;
    let iteration = if p < 2.0 {
        IterationKind::DirectQuadratic
    } else {
        IterationKind::DualQuadratic
    };
    let big_q = approximant(Arc::new(f.clone()), iteration, &fn_y, sweep)?;
    let reports = vec![
        StabilityReport::new("classical-hypothesis"),
        StabilityReport::new("classical-bound").with_constant(c),
    ];
    // Crisp memberships only change at the norm value, so each check adds a
    // level just above its bound.
    let rows = |i: usize, residual: f64, bound: f64| {
        let probe = if bound > 0.0 {
            bound * (1.0 + 1e-12)
        } else {
            f64::MIN_POSITIVE
        };
        let rows = sweep
            .grid
            .values()
            .iter()
            .copied()
            .chain([probe])
            .map(|t| ReportRow::new(i, t, None, fn_y.membership_of_norm(residual, t), fn_x.membership_of_norm(bound, t)))
            .collect();
        SampleRows {
            residual: Some(residual),
            rows,
        }
    };
    collect(reports, sweep.samples.len(), |i| {
        let (x, y) = (&sweep.samples[i], &sweep.partners[i]);
        let nx = norm_x.norm_unchecked(x);
        let d = norm_y.norm_unchecked(&pexider_defect_of(f, f, f, x, y)?);
        let hypothesis = rows(i, d, nx.powf(p) + norm_x.norm_unchecked(y).powf(p));
        let Some(qx) = converged(big_q.eval(x))? else {
            return Ok(None);
        };
        let r = norm_y.norm_unchecked(&(&qx - &f.apply(x)?));
        Ok(Some(vec![hypothesis, rows(i, r, c * nx.powf(p))]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Matrix;
    use crate::fuzzy::TGrid;
    use crate::hyers::HyersOptions;
    use crate::space::NormKind;
    use std::f64::consts::SQRT_2;

    fn s(v: f64) -> Vector {
        Vector::scalar(v).unwrap()
    }

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn nk(k: f64) -> FuzzyNorm {
        FuzzyNorm::nk_scalar(k).unwrap()
    }

    fn scalar_sweep(xs: &[f64], tol: f64) -> Sweep {
        let samples: Vec<Vector> = xs.iter().map(|&x| s(x)).collect();
        let options = HyersOptions {
            tol,
            ..HyersOptions::default()
        };
        Sweep::diagonal(samples, TGrid::new(1e-2, 1e4, 16).unwrap(), options).unwrap()
    }

    fn plane_sweep() -> Sweep {
        let xs = vec![v(&[1.0, 0.0]), v(&[-0.3, 2.2]), v(&[0.05, -0.01]), v(&[3.0, 4.0])];
        Sweep::diagonal(xs, TGrid::new(1e-2, 1e4, 16).unwrap(), HyersOptions::default()).unwrap()
    }

    fn sqrt_triple() -> PexiderTriple {
        PexiderTriple::inner_product_family(v(&[0.5, -1.0]), s(1.0), s(2.0), s(1.0)).unwrap()
    }

    #[test]
    fn algebra_bound_matches_closed_form() {
        let f = FunctionSpec::normed_algebra(s(1.0));
        let sweep = scalar_sweep(&[-2.0, -0.5, 0.25, 1.0, 3.0], 1e-15);
        let reports = verify_quadratic_stability(&f, &nk(1.0), &nk(2.0), 1.0, &sweep).unwrap();
        assert_eq!(reports[0].constant, Some(0.25));
        for report in &reports {
            assert!(report.converged());
            assert!(report.passed(), "{}: {:?}", report.check, report.summary());
        }
        for row in &reports[0].rows {
            let x = sweep.samples[row.x_id].as_slice()[0].abs();
            let closed = row.t / (row.t + 2.0 * x) - row.t / (row.t + 4.0 * x);
            assert!((row.margin - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_quadratic_has_unit_lhs() {
        let f = FunctionSpec::quadratic_form(Matrix::identity(2), v(&[1.0, -1.0])).unwrap();
        let fn_x = FuzzyNorm::nk(1.0, ClassicalNorm::l2(2)).unwrap();
        let fn_y = FuzzyNorm::nk(1.0, ClassicalNorm::l2(2)).unwrap();
        let reports = verify_quadratic_stability(&f, &fn_x, &fn_y, 2.0, &plane_sweep()).unwrap();
        assert!(reports.iter().all(|r| r.rows.iter().all(|row| row.lhs == 1.0)));
        assert!(verify_quadratic_stability(&f, &fn_x, &fn_y, 0.5, &plane_sweep()).is_err());
    }

    #[test]
    fn divergent_points_are_reported() {
        let f = FunctionSpec::ScalarPolynomial {
            coeffs: vec![0.0, 0.0, 0.0, 1.0],
            direction: s(1.0),
        };
        let reports = verify_quadratic_stability(&f, &nk(1.0), &nk(1.0), 1.0, &scalar_sweep(&[0.0, 1.0], 1e-9)).unwrap();
        assert_eq!(reports[0].nonconverged, vec![1]);
        assert!(reports[0].rows.iter().all(|r| r.x_id == 0));
    }

    #[test]
    fn odd_parts_of_sqrt_triple_are_exact() {
        let phi = ControlFunction::sqrt_pexider(1.0).unwrap();
        let reports = verify_odd_pexider(&sqrt_triple(), &phi, &nk(1.0), &nk(1.0), &plane_sweep()).unwrap();
        for r in &reports {
            assert!(r.passed() && r.converged());
            assert!(r.max_residual.unwrap() < 1e-12);
        }
        let bad = ControlFunction::power_sum(1.5).unwrap();
        assert!(verify_odd_pexider(&sqrt_triple(), &bad, &nk(1.0), &nk(1.0), &plane_sweep()).is_err());
    }

    #[test]
    fn even_parts_of_sqrt_triple() {
        let phi = ControlFunction::sqrt_pexider(1.0).unwrap();
        let sweep = plane_sweep();
        let reports = verify_even_pexider(&sqrt_triple(), &phi, &nk(1.0), &nk(1.0), &sweep).unwrap();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert!(r.passed() && r.converged(), "{}: {:?}", r.check, r.summary());
        }
        // |x| = 1: lhs = t/(t + 1), rhs = c t/(c t + 6)
        let c = (4.0 - SQRT_2) / 16.0;
        for row in reports[0].rows.iter().filter(|r| r.x_id == 0) {
            assert!((row.lhs - row.t / (row.t + 1.0)).abs() < 1e-9);
            assert!((row.rhs - c * row.t / (c * row.t + 6.0)).abs() < 1e-12);
        }
        // g's even part is Q itself
        assert!(reports[1].max_residual.unwrap() < 1e-8);
    }

    #[test]
    fn even_check_rejects_nonzero_origin() {
        let shifted = FunctionSpec::ScalarPolynomial {
            coeffs: vec![1.0, 0.0, 1.0],
            direction: s(1.0),
        };
        let trip = PexiderTriple::diagonal(shifted).unwrap();
        let phi = ControlFunction::power_sum(1.0).unwrap();
        let e = verify_even_pexider(&trip, &phi, &nk(1.0), &nk(1.0), &scalar_sweep(&[1.0], 1e-9)).unwrap_err();
        assert!(e.to_string().contains("vanish at the origin"));
    }

    #[test]
    fn decomposition_recovers_parts() {
        let f = FunctionSpec::Sum {
            terms: vec![
                FunctionSpec::quadratic_form(Matrix::new(vec![vec![2.0, 1.0], vec![1.0, -1.0]]).unwrap(), s(1.0)).unwrap(),
                FunctionSpec::LinearMap {
                    matrix: Matrix::new(vec![vec![0.5, -3.0]]).unwrap(),
                },
            ],
        };
        let phi = ControlFunction::power_sum(0.5).unwrap();
        let sweep = plane_sweep();
        let r = verify_decomposition(&f, &phi, &nk(1.0), &nk(1.0), &sweep).unwrap();
        assert!(r.passed() && r.converged());
        assert!(r.rows.iter().all(|row| (row.lhs - 1.0).abs() < 1e-12));
        let parts = decompose(&f, &nk(1.0), &sweep).unwrap();
        for x in &sweep.samples {
            let (a, b) = (x.as_slice()[0], x.as_slice()[1]);
            let t = parts.additive.eval(x).unwrap().as_slice()[0];
            let q = parts.quadratic.eval(x).unwrap().as_slice()[0];
            assert!((t - (0.5 * a - 3.0 * b)).abs() < 1e-8);
            assert!((q - (2.0 * a * a + 2.0 * a * b - b * b)).abs() < 1e-8);
        }
    }

    #[test]
    fn classical_perturbed_quadratic() {
        let f = FunctionSpec::PerturbedQuadratic {
            matrix: Matrix::identity(1),
            direction: s(1.0),
            c: 1.0,
            r: 1.0,
            perturbation_direction: None,
            norm: NormKind::L2,
        };
        let sweep = Sweep::new(
            [-3.0, -1.0, 0.0, 0.5, 2.0].iter().map(|&x| s(x)).collect(),
            [1.0, -1.0, 2.0, 0.5, -0.1].iter().map(|&x| s(x)).collect(),
            TGrid::new(1e-2, 1e2, 9).unwrap(),
            HyersOptions::default(),
        )
        .unwrap();
        let n = ClassicalNorm::l2(1);
        let reports = verify_classical(&f, 1.0, None, &n, &n, &sweep).unwrap();
        assert_eq!(reports[1].constant, Some(4.0));
        for r in &reports {
            assert!(r.passed() && r.converged(), "{}: {:?}", r.check, r.summary());
        }
        // ‖Q - f‖ = |x| ≤ 0.9 |x| fails wherever x ≠ 0
        let tight = verify_classical(&f, 1.0, Some(0.9), &n, &n, &sweep).unwrap();
        assert!(!tight[1].passed());
        let e = verify_classical(&f, 3.0, None, &n, &n, &sweep).unwrap_err();
        assert!(e.to_string().contains("constant nonpositive"));
        assert!(verify_classical(&f, 1.0, Some(-1.0), &n, &n, &sweep).is_err());
    }
}
