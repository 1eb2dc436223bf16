use std::sync::Arc;

use fuzzyquad::catalog::{even_part, odd_part, ControlFunction, FunctionSpec, Matrix, PexiderTriple, VectorMap};
use fuzzyquad::fuzzy::{FuzzyNorm, TGrid, MEMBERSHIP_SLACK};
use fuzzyquad::hyers::{HyersOptions, IterationKind};
use fuzzyquad::hyers::Approximant;
use fuzzyquad::space::{ClassicalNorm, NormKind, Vector};
use fuzzyquad::verify::{
    check_control_bounded, check_q_almost, quadratic_bound_constant, quadratic_defect,
    six_point_bound, three_point_bound, Sweep,
};
use proptest::prelude::*;

fn vec_in(dim: usize, r: f64) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-r..r, dim).prop_map(|c| Vector::new(c).unwrap())
}

fn level() -> impl Strategy<Value = f64> {
    (-3.0f64..6.0).prop_map(|e| 10f64.powf(e))
}

fn norm_kind() -> impl Strategy<Value = NormKind> {
    prop_oneof![Just(NormKind::L1), Just(NormKind::L2), Just(NormKind::LInf)]
}

fn fuzzy(dim: usize) -> impl Strategy<Value = FuzzyNorm> {
    (norm_kind(), prop_oneof![Just(None), (0.1f64..5.0).prop_map(Some)]).prop_map(move |(kind, k)| {
        let base = ClassicalNorm::new(dim, kind).unwrap();
        match k {
            Some(k) => FuzzyNorm::nk(k, base).unwrap(),
            None => FuzzyNorm::crisp(base),
        }
    })
}

fn mixed() -> FunctionSpec {
    FunctionSpec::Sum {
        terms: vec![
            FunctionSpec::quadratic_form(Matrix::new(vec![vec![1.0, 0.5], vec![0.5, -2.0]]).unwrap(), Vector::new(vec![1.0, 2.0]).unwrap()).unwrap(),
            FunctionSpec::LinearMap {
                matrix: Matrix::new(vec![vec![3.0, -1.0], vec![0.0, 0.5]]).unwrap(),
            },
            FunctionSpec::normed_algebra(Vector::new(vec![0.25, -1.0]).unwrap()),
        ],
    }
}

proptest! {
    #[test]
    fn membership_axioms_hold(fz in fuzzy(3), x in vec_in(3, 50.0), y in vec_in(3, 50.0),
                              s in level(), t in level(), c in -20.0f64..20.0) {
        let m = |v: &Vector, t: f64| fz.eval(v, t).unwrap().value();
        let mx = m(&x, t);
        prop_assert!((0.0..=1.0).contains(&mx));
        prop_assert_eq!(m(&x, -t), 0.0);
        prop_assert!(m(&x, t * 1.5) >= mx);
        prop_assert!(m(&(&x + &y), s + t) >= m(&x, s).min(m(&y, t)) - MEMBERSHIP_SLACK);
        if c != 0.0 && matches!(fz.kind(), fuzzyquad::fuzzy::FuzzyKind::Nk { .. }) {
            prop_assert!((m(&x.scale(c), t) - m(&x, t / c.abs())).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_parts_recombine(x in vec_in(2, 20.0)) {
        let f = mixed();
        let (o, e) = (odd_part(&f), even_part(&f));
        let sum = &o.apply(&x).unwrap() + &e.apply(&x).unwrap();
        let fx = f.apply(&x).unwrap();
        for (a, b) in sum.as_slice().iter().zip(fx.as_slice()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
        prop_assert_eq!(o.apply(&-&x).unwrap(), -&o.apply(&x).unwrap());
        prop_assert_eq!(e.apply(&-&x).unwrap(), e.apply(&x).unwrap());
    }

    #[test]
    fn quadratic_forms_have_zero_defect(x in vec_in(2, 10.0), y in vec_in(2, 10.0)) {
        let f = FunctionSpec::quadratic_form(Matrix::new(vec![vec![2.0, -1.0], vec![-1.0, 3.0]]).unwrap(), Vector::scalar(1.0).unwrap()).unwrap();
        let d = quadratic_defect(&f, &x, &y).unwrap();
        let scale = x.dot(&x) + y.dot(&y);
        prop_assert!(d.max_abs() <= 1e-12 * (1.0 + 20.0 * scale));
    }

    #[test]
    fn composite_bounds(x in vec_in(2, 10.0), t in level(), z in 0.1f64..5.0) {
        let phi = ControlFunction::sqrt_pexider(z).unwrap();
        let fz = FuzzyNorm::nk_scalar(1.0).unwrap();
        let n2 = three_point_bound(&phi, &fz, &x, t).unwrap().value();
        let m = six_point_bound(&phi, &fz, &x, t).unwrap().value();
        prop_assert!(m <= n2);
        prop_assert!(three_point_bound(&phi, &fz, &x, 2.0 * t).unwrap().value() >= n2);
        prop_assert!(six_point_bound(&phi, &fz, &x, 2.0 * t).unwrap().value() >= m);
        prop_assert_eq!(three_point_bound(&phi, &fz, &Vector::zeros(2), t).unwrap().value(), 1.0);
        prop_assert_eq!(six_point_bound(&phi, &fz, &Vector::zeros(2), t).unwrap().value(), 1.0);
        prop_assert_eq!(three_point_bound(&phi, &fz, &x, -t).unwrap().value(), 0.0);
    }

    #[test]
    fn quadratic_bound_constant_positive(q in 0.5001f64..50.0) {
        let c = quadratic_bound_constant(q).unwrap().value;
        prop_assert!(c > 0.0 && c < 0.75f64.powf(q) + 1e-15);
    }

    #[test]
    fn crisp_q_almost_is_the_classical_comparison(x in -5.0f64..5.0, y in -5.0f64..5.0,
                                                   s in 0.01f64..30.0, t in 0.01f64..30.0, q in 0.6f64..3.0) {
        let f = FunctionSpec::ScalarPolynomial { coeffs: vec![0.0, 0.0, 0.0, 1.0], direction: Vector::scalar(1.0).unwrap() };
        let crisp = FuzzyNorm::crisp(ClassicalNorm::l2(1));
        let (vx, vy) = (Vector::scalar(x).unwrap(), Vector::scalar(y).unwrap());
        let sweep = Sweep::new(vec![vx.clone()], vec![vy.clone()], TGrid::default(), HyersOptions::default()).unwrap();
        let r = check_q_almost(&f, &crisp, &crisp, q, &sweep, &[vec![(s, t)]]).unwrap();
        let d = quadratic_defect(&f, &vx, &vy).unwrap().as_slice()[0].abs();
        let classical = d < t + s || !(t.powf(q) > x.abs() && s.powf(q) > y.abs());
        prop_assert_eq!(r.rows[0].pass, classical);
    }

    #[test]
    fn negated_control_changes_nothing(x in vec_in(2, 5.0), y in vec_in(2, 5.0)) {
        let trip = PexiderTriple::inner_product_family(
            Vector::new(vec![1.0, 2.0]).unwrap(), Vector::scalar(1.0).unwrap(),
            Vector::scalar(-0.5).unwrap(), Vector::scalar(2.0).unwrap()).unwrap();
        let phi = ControlFunction::sqrt_pexider(2.0).unwrap();
        let neg = phi.clone().scaled(-1.0).unwrap();
        let fz = FuzzyNorm::nk_scalar(1.0).unwrap();
        let sweep = Sweep::new(vec![x], vec![y], TGrid::new(1e-2, 1e2, 8).unwrap(), HyersOptions::default()).unwrap();
        let a = check_control_bounded(&trip, &phi, &fz, &fz, &sweep).unwrap();
        let b = check_control_bounded(&trip, &neg, &fz, &fz, &sweep).unwrap();
        prop_assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn approximants_scale(x in vec_in(2, 8.0)) {
        let f: Arc<dyn VectorMap> = Arc::new(mixed());
        let fy = FuzzyNorm::nk(1.0, ClassicalNorm::l2(2)).unwrap();
        let q = Approximant::new(even_part(&mixed()), IterationKind::DirectQuadratic, fy.clone(), TGrid::default(), HyersOptions::default()).unwrap();
        let t = Approximant::new(odd_part(&mixed()), IterationKind::DirectAdditive, fy, TGrid::default(), HyersOptions::default()).unwrap();
        let x2 = x.scale(2.0);
        let dq = &q.eval(&x2).unwrap() - &q.eval(&x).unwrap().scale(4.0);
        let dt = &t.eval(&x2).unwrap() - &t.eval(&x).unwrap().scale(2.0);
        prop_assert!(dq.max_abs() < 1e-8, "{dq:?}");
        prop_assert!(dt.max_abs() < 1e-8, "{dt:?}");
        prop_assert_eq!(f.domain_dim(), 2);
    }
}
