use super::*;
use crate::charts::{make_chart, ChartKind};
use crate::testutil::{build, field, parity, spec, v};
use alloc::vec;
use proptest::prelude::*;

#[test]
fn lifts_of_basic_functions() {
    let base = make_chart(ChartKind::Base, 1, 2);
    let tm = make_chart(ChartKind::Tangent, 1, 2);
    let (q, t1, t2) = (v(&base, "q1"), v(&base, "th1"), v(&base, "th2"));
    let lift = |f: &SuperFunction| vertical_lift_function(f, &tm).unwrap();
    assert_eq!(lift(&(&q * &q)), (&v(&tm, "q1") * &v(&tm, "v1")).scale_int(2));
    assert_eq!(lift(&t1), v(&tm, "z1"));
    let want = &(&v(&tm, "z1") * &v(&tm, "th2")) + &(&v(&tm, "th1") * &v(&tm, "z2"));
    assert_eq!(lift(&(&t1 * &t2)), want);
    assert_eq!(
        lift(&(&q * &t2)),
        &(&v(&tm, "v1") * &v(&tm, "th2")) + &(&v(&tm, "q1") * &v(&tm, "z2"))
    );

    let stm = make_chart(ChartKind::TangentSuper, 1, 2);
    let want = &(&v(&stm, "v1") + &v(&stm, "pv1")).scale_int(2) * &v(&stm, "q1");
    assert_eq!(vertical_lift_function(&(&q * &q), &stm).unwrap(), want);
    assert_eq!(vertical_lift_function(&t1, &stm).unwrap(), &v(&stm, "z1") + &v(&stm, "pz1"));
}

#[test]
fn lifts_reject_wrong_charts() {
    let tstar = make_chart(ChartKind::Cotangent, 1, 1);
    assert!(total_time_derivative(&tstar).is_err());
    assert!(VerticalEndomorphism::new(&tstar).is_err());
}

#[test]
fn vertical_endomorphism_on_tm() {
    let tm = make_chart(ChartKind::Tangent, 2, 2);
    let s = VerticalEndomorphism::new(&tm).unwrap();
    let y = SuperVectorField::from_named(
        &tm,
        &[("q1", v(&tm, "v2")), ("th2", v(&tm, "q1")), ("v1", v(&tm, "q2"))],
    )
    .unwrap();
    let want = SuperVectorField::from_named(&tm, &[("v1", v(&tm, "v2")), ("z2", v(&tm, "q1"))]).unwrap();
    assert_eq!(s.apply(&y).unwrap(), want);
    assert!(s.apply(&s.apply(&y).unwrap()).unwrap().is_zero());

    let mat = s.matrix().unwrap();
    let rank = mat.body_rank().unwrap();
    assert_eq!(rank, 4);
    // S∘S = 0 and rank S = dim/2 give Im S = ker S.
    assert!(mat.mul(&mat).unwrap().is_zero());
    assert_eq!(tm.len() - rank, rank);
}

#[test]
fn vertical_endomorphism_on_stm() {
    let stm = make_chart(ChartKind::TangentSuper, 1, 1);
    let s = VerticalEndomorphism::new(&stm).unwrap();
    let got = s.apply(&SuperVectorField::partial(&stm, stm.lookup("q1").unwrap())).unwrap();
    let one = SuperFunction::one(&stm);
    let want = SuperVectorField::from_named(&stm, &[("v1", one.clone()), ("pv1", one.clone())]).unwrap();
    assert_eq!(got, want);
    let got = s.apply(&SuperVectorField::partial(&stm, stm.lookup("th1").unwrap())).unwrap();
    let want = SuperVectorField::from_named(&stm, &[("z1", one.clone()), ("pz1", one)]).unwrap();
    assert_eq!(got, want);
    let mat = s.matrix().unwrap();
    assert!(mat.mul(&mat).unwrap().is_zero());
    assert_eq!(mat.body_rank().unwrap(), 2);
}

#[test]
fn liouville_field_counts_fiber_degree() {
    let tm = make_chart(ChartKind::Tangent, 1, 2);
    let d = liouville_field(&tm).unwrap();
    let vv = &v(&tm, "v1") * &v(&tm, "v1");
    assert_eq!(d.apply(&vv).unwrap(), vv.scale_int(2));
    assert!(d.apply(&v(&tm, "q1")).unwrap().is_zero());
    let zz = &v(&tm, "z1") * &v(&tm, "z2");
    assert_eq!(d.apply(&zz).unwrap(), zz.scale_int(2));
    let mixed = &v(&tm, "th1") * &v(&tm, "z2");
    assert_eq!(d.apply(&mixed).unwrap(), mixed);
    assert_eq!(d.parity(), Some(Parity::Even));
}

#[test]
fn lift_determines_fields() {
    for (m, n) in [(1, 0), (1, 1), (2, 1), (1, 2)] {
        let (rank, unknowns) = lift_determinacy(m, n).unwrap();
        assert_eq!(rank, unknowns, "type ({m}, {n})");
    }
}

#[test]
fn sections_round_trip() {
    let base = make_chart(ChartKind::Base, 1, 2);
    let (q, t1, t2) = (v(&base, "q1"), v(&base, "th1"), v(&base, "th2"));
    // Inhomogeneous components exercise every slot of the section.
    let x = SuperVectorField::new(
        &base,
        vec![&q + &t1, &(&t1 * &t2) + &t2, &q * &q],
    )
    .unwrap();
    let along = hat_restrict(&x, &SuperMorphism::identity(&base)).unwrap();
    let sigma = field_to_section(&along).unwrap();
    let st = sigma.target().clone();
    assert_eq!(*sigma.assignment_of("v1").unwrap(), q);
    assert_eq!(*sigma.assignment_of("pv1").unwrap(), t1);
    assert_eq!(*sigma.assignment_of("z1").unwrap(), t2);
    assert_eq!(*sigma.assignment_of("pz1").unwrap(), &t1 * &t2);
    assert_eq!(*sigma.assignment_of("pz2").unwrap(), &q * &q);
    assert!(sigma.assignment_of("z2").unwrap().is_zero());
    let tau = canonical_projection(&st).unwrap();
    assert!(tau.compose(&sigma).unwrap().is_identity());
    assert_eq!(section_to_field(&sigma).unwrap(), along);
}

#[test]
fn total_derivative_is_the_identity_section() {
    let stm = make_chart(ChartKind::TangentSuper, 2, 1);
    let t = total_time_derivative(&stm).unwrap();
    let from_id = section_to_field(&SuperMorphism::identity(&stm)).unwrap();
    assert_eq!(t, from_id);
}

#[test]
fn projectability_cases() {
    let tm = make_chart(ChartKind::Tangent, 1, 1);
    let base = make_chart(ChartKind::Base, 1, 1);
    let tau = canonical_projection(&tm).unwrap();
    let y = SuperVectorField::from_named(&tm, &[("q1", v(&tm, "q1")), ("v1", v(&tm, "v1"))]).unwrap();
    match projectability(&push_along(&y, &tau).unwrap()).unwrap() {
        Projectability::Projectable(x) => {
            assert_eq!(x, SuperVectorField::from_named(&base, &[("q1", v(&base, "q1"))]).unwrap())
        }
        other => panic!("{other:?}"),
    }
    let y = SuperVectorField::from_named(&tm, &[("q1", v(&tm, "v1"))]).unwrap();
    assert!(matches!(
        projectability(&push_along(&y, &tau).unwrap()).unwrap(),
        Projectability::NotProjectable { .. }
    ));
    let sq = SuperMorphism::new(&base, &base, vec![&v(&base, "q1") * &v(&base, "q1"), v(&base, "th1")]).unwrap();
    let y = SuperVectorField::partial(&base, 0);
    assert_eq!(projectability(&push_along(&y, &sq).unwrap()).unwrap(), Projectability::Undecided);
}

#[test]
fn bracket_of_coordinate_fields() {
    let cs = make_chart(ChartKind::Base, 1, 2);
    let d1 = SuperVectorField::partial(&cs, 1);
    assert!(d1.bracket(&d1).unwrap().is_zero());
    // [θ1 ∂θ2, θ2 ∂θ1] = θ1 ∂θ1 − θ2 ∂θ2
    let a = SuperVectorField::from_named(&cs, &[("th2", v(&cs, "th1"))]).unwrap();
    let b = SuperVectorField::from_named(&cs, &[("th1", v(&cs, "th2"))]).unwrap();
    let want = SuperVectorField::from_named(
        &cs,
        &[("th1", v(&cs, "th1")), ("th2", v(&cs, "th2").scale_int(-1))],
    )
    .unwrap();
    assert_eq!(a.bracket(&b).unwrap(), want);
}

#[test]
fn display() {
    let cs = make_chart(ChartKind::Base, 1, 1);
    let x = SuperVectorField::from_named(&cs, &[("q1", SuperFunction::one(&cs)), ("th1", v(&cs, "q1"))]).unwrap();
    assert_eq!(alloc::format!("{x}"), "∂q1 + q1 ∂th1");
    assert_eq!(alloc::format!("{}", SuperVectorField::zero(&cs)), "0");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn field_leibniz(px in parity(), specs in prop::collection::vec(spec(), 1..4),
                     pf in parity(), sf in spec(), sg in spec()) {
        let cs = make_chart(ChartKind::Tangent, 1, 2);
        let x = field(&cs, &specs, px);
        let f = build(&cs, &sf, Some(pf));
        let g = build(&cs, &sg, None);
        let lhs = x.apply(&(&f * &g)).unwrap();
        let rhs = &(&x.apply(&f).unwrap() * &g) + &(&f * &x.apply(&g).unwrap()).scale_int(px.koszul(pf));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lift_of_field_on_lift_of_function(px in parity(), specs in prop::collection::vec(spec(), 1..4), sf in spec()) {
        let base = make_chart(ChartKind::Base, 2, 2);
        let x = field(&base, &specs, px);
        let f = build(&base, &sf, None);
        let xf = x.apply(&f).unwrap();
        for (kind, factor) in [(ChartKind::Tangent, 1), (ChartKind::TangentSuper, 2)] {
            let total = make_chart(kind, 2, 2);
            let tau = canonical_projection(&total).unwrap();
            let xv = vertical_lift_base_field(&x, &total).unwrap();
            let fv = vertical_lift_function(&f, &total).unwrap();
            prop_assert_eq!(xv.apply(&fv).unwrap(), tau.pullback(&xf).unwrap().scale_int(factor));
        }
    }

    #[test]
    fn s_squares_to_zero(py in parity(), specs in prop::collection::vec(spec(), 1..4)) {
        for kind in [ChartKind::Tangent, ChartKind::TangentSuper] {
            let total = make_chart(kind, 1, 2);
            let s = VerticalEndomorphism::new(&total).unwrap();
            let y = field(&total, &specs, py);
            let sy = s.apply(&y).unwrap();
            prop_assert!(s.apply(&sy).unwrap().is_zero());
            if kind == ChartKind::Tangent && !sy.is_zero() {
                prop_assert_eq!(sy.parity(), y.parity());
            }
        }
    }

    #[test]
    fn section_round_trip(specs in prop::collection::vec(spec(), 1..4), px in parity()) {
        let base = make_chart(ChartKind::Base, 2, 2);
        let x = field(&base, &specs, px);
        let along = hat_restrict(&x, &SuperMorphism::identity(&base)).unwrap();
        let sigma = field_to_section(&along).unwrap();
        prop_assert_eq!(section_to_field(&sigma).unwrap(), along);
    }
}
