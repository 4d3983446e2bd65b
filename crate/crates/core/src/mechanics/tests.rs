use super::*;
use crate::charts::make_chart;
use crate::fields::SuperVectorField;
use crate::scalar::{rational, ScalarExpr};
use crate::testutil::{build, spec, v};
use proptest::prelude::*;

fn half(f: &SuperFunction) -> SuperFunction {
    f.scale(&ScalarExpr::from_rational(rational(1, 2)))
}

fn free_superparticle() -> SuperFunction {
    let tm = make_chart(ChartKind::Tangent, 1, 2);
    &half(&(&v(&tm, "v1") * &v(&tm, "v1"))) + &half(&(&v(&tm, "z1") * &v(&tm, "z2")))
}

fn oscillator() -> SuperFunction {
    let tm = make_chart(ChartKind::Tangent, 1, 0);
    &half(&(&v(&tm, "v1") * &v(&tm, "v1"))) - &half(&(&v(&tm, "q1") * &v(&tm, "q1")))
}

fn odd_model() -> SuperFunction {
    let tm = make_chart(ChartKind::Tangent, 1, 1);
    &v(&tm, "v1") * &v(&tm, "z1")
}

fn field(cs: &Chart, named: &[(&str, SuperFunction)]) -> SuperVectorField {
    SuperVectorField::from_named(cs, named).unwrap()
}

#[test]
fn cartan_forms_of_the_free_particle() {
    let tm = make_chart(ChartKind::Tangent, 1, 0);
    let l = half(&(&v(&tm, "v1") * &v(&tm, "v1")));
    assert_eq!(cartan_one_form(&l).unwrap(), GradedForm::monomial(&v(&tm, "v1"), &[0]));
    let dq_dv = GradedForm::monomial(&SuperFunction::one(&tm), &[0, 1]);
    assert_eq!(cartan_two_form(&l).unwrap(), dq_dv);
    assert_eq!(energy(&l).unwrap(), l);
}

#[test]
fn cartan_forms_of_the_free_superparticle() {
    let l = free_superparticle();
    let tm = l.chart().clone();
    let th = cartan_one_form(&l).unwrap();
    assert_eq!(th.coefficient(&[0]), v(&tm, "v1"));
    assert_eq!(th.coefficient(&[tm.lookup("th1").unwrap()]), half(&v(&tm, "z2")).scale_int(-1));
    assert_eq!(th.coefficient(&[tm.lookup("th2").unwrap()]), half(&v(&tm, "z1")));
    assert_eq!(energy(&l).unwrap(), l);
    assert!(cartan_two_form(&l).unwrap().exterior_derivative().is_zero());
}

#[test]
fn energy_adds_the_potential() {
    let l = oscillator();
    let tm = l.chart().clone();
    let want = &half(&(&v(&tm, "v1") * &v(&tm, "v1"))) + &half(&(&v(&tm, "q1") * &v(&tm, "q1")));
    assert_eq!(energy(&l).unwrap(), want);
}

#[test]
fn regularity_examples() {
    let r = regularity(&free_superparticle()).unwrap();
    assert!(r.is_regular() && r.criteria_agree());
    assert_eq!(r.blocks[1].matrix.body().determinant().unwrap(), ScalarExpr::from_rational(rational(1, 4)));

    let tm = make_chart(ChartKind::Tangent, 1, 1);
    let r = regularity(&half(&(&v(&tm, "v1") * &v(&tm, "v1")))).unwrap();
    assert!(!r.is_regular() && r.criteria_agree());

    let r = regularity(&odd_model()).unwrap();
    assert_eq!(r.parity, Parity::Odd);
    assert!(r.is_regular() && r.criteria_agree());

    let tm = make_chart(ChartKind::Tangent, 2, 1);
    let r = regularity(&(&v(&tm, "v1") * &v(&tm, "z1"))).unwrap();
    assert!(!r.criterion_regular);
    assert!(r.criteria_agree());

    let inhom = &v(&tm, "v1") + &v(&tm, "z1");
    assert_eq!(regularity(&inhom), Err(Error::NotHomogeneous));
    let st = make_chart(ChartKind::TangentSuper, 1, 1);
    assert!(regularity(&v(&st, "v1")).is_err());
}

#[test]
fn dynamics_examples() {
    let l = oscillator();
    let tm = l.chart().clone();
    let d = dynamics(&l).unwrap();
    assert!(d.verified());
    assert_eq!(d.gamma, field(&tm, &[("q1", v(&tm, "v1")), ("v1", v(&tm, "q1").scale_int(-1))]));

    let l = free_superparticle();
    let tm = l.chart().clone();
    let d = dynamics(&l).unwrap();
    assert!(d.verified());
    let want = field(&tm, &[("q1", v(&tm, "v1")), ("th1", v(&tm, "z1")), ("th2", v(&tm, "z2"))]);
    assert_eq!(d.gamma, want);

    let d = dynamics(&odd_model()).unwrap();
    assert!(d.verified(), "{:?}", d);

    let tm = make_chart(ChartKind::Tangent, 1, 1);
    let degenerate = half(&(&v(&tm, "v1") * &v(&tm, "v1")));
    assert!(matches!(dynamics(&degenerate), Err(Error::Degenerate(_))));
}

#[test]
fn euler_lagrange_display() {
    let eqs = euler_lagrange(&oscillator()).unwrap();
    let lines: Vec<String> = eqs.iter().map(|e| alloc::format!("{e}")).collect();
    assert_eq!(lines, ["d/dt q1 = v1", "d/dt v1 = -q1"]);
    assert!(euler_lagrange(&half(&v(&make_chart(ChartKind::Tangent, 1, 1), "q1"))).is_err());
}

#[test]
fn even_lagrangians_with_odd_n_are_degenerate() {
    let tm = make_chart(ChartKind::Tangent, 1, 1);
    let l = &half(&(&v(&tm, "v1") * &v(&tm, "v1"))) + &(&v(&tm, "th1") * &v(&tm, "z1"));
    let r = regularity(&l).unwrap();
    assert!(!r.is_regular());
}

/// Quadratic even Lagrangians ½a v1² + b v1 v2 + ½c v2² + ½k z1 z2 + potential
/// on (2, 2).
fn quadratic(a: i64, b: i64, c: i64, k: i64, p: i64) -> SuperFunction {
    let tm = make_chart(ChartKind::Tangent, 2, 2);
    let (v1, v2) = (v(&tm, "v1"), v(&tm, "v2"));
    let mut l = half(&(&v1 * &v1).scale_int(a));
    l = &l + &(&v1 * &v2).scale_int(b);
    l = &l + &half(&(&v2 * &v2).scale_int(c));
    l = &l + &half(&(&v(&tm, "z1") * &v(&tm, "z2")).scale_int(k));
    l = &l + &(&(&v(&tm, "q1") * &v(&tm, "th1")) * &v(&tm, "th2")).scale_int(p);
    l
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cartan_one_form_is_semibasic(s in spec()) {
        let tm = make_chart(ChartKind::Tangent, 1, 2);
        let l = build(&tm, &s, Some(Parity::Even));
        let th = cartan_one_form(&l).unwrap();
        for name in ["v1", "z1", "z2"] {
            let y = SuperVectorField::partial(&tm, tm.lookup(name).unwrap());
            prop_assert!(th.contract(&y).unwrap().is_zero());
        }
    }

    #[test]
    fn hessian_criterion_matches_omega_rank(a in -2i64..3, b in -2i64..3, c in -2i64..3, k in -1i64..2, p in -1i64..2) {
        let r = regularity(&quadratic(a, b, c, k, p)).unwrap();
        prop_assert!(r.criteria_agree(), "{}", r);
        if r.is_regular() {
            prop_assert!(dynamics(&quadratic(a, b, c, k, p)).unwrap().verified());
        }
    }
}
