use super::*;
use crate::scalar::ScalarExpr;
use crate::superalgebra::{Parity, SuperFunction};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use proptest::prelude::*;

fn names(cs: &Chart) -> Vec<(String, Parity)> {
    cs.coords().iter().map(|c| (String::from(&*c.name), c.parity)).collect()
}

fn v(cs: &Chart, n: &str) -> SuperFunction {
    SuperFunction::var(cs, n).unwrap()
}

fn morph(cs: &Chart, pairs: &[(&str, SuperFunction)]) -> SuperMorphism {
    let named: BTreeMap<String, SuperFunction> =
        pairs.iter().map(|(k, f)| (String::from(*k), f.clone())).collect();
    SuperMorphism::from_named(cs, cs, &named).unwrap()
}

#[test]
fn tangent_super_layout() {
    let cs = make_chart(ChartKind::TangentSuper, 1, 1);
    use Parity::*;
    let want = [("q1", Even), ("v1", Even), ("pz1", Even), ("th1", Odd), ("z1", Odd), ("pv1", Odd)];
    let got = names(&cs);
    assert_eq!(got.len(), want.len());
    for ((gn, gp), (wn, wp)) in got.iter().zip(want) {
        assert_eq!((gn.as_str(), *gp), (wn, wp));
    }
    assert_eq!(make_chart(ChartKind::TangentSuper, 2, 3).dims(), (2 * 2 + 3, 2 * 3 + 2));
    assert_eq!(make_chart(ChartKind::Tangent, 2, 3).dims(), (2 + 2, 3 + 3));
}

#[test]
fn base_and_cotangent_layouts() {
    let b = make_chart(ChartKind::Base, 2, 0);
    assert_eq!(names(&b), vec![(String::from("q1"), Parity::Even), (String::from("q2"), Parity::Even)]);
    let c = make_chart(ChartKind::Cotangent, 1, 1);
    let n: Vec<String> = names(&c).into_iter().map(|x| x.0).collect();
    assert_eq!(n, ["q1", "p1", "th1", "eta1"]);
    let s = make_chart(ChartKind::OddSector, 1, 1);
    let n: Vec<String> = names(&s).into_iter().map(|x| x.0).collect();
    assert_eq!(n, ["q1", "peta1", "th1", "pp1"]);
    assert_eq!(s.parity(1), Parity::Even);
    assert_eq!(s.parity(3), Parity::Odd);
}

#[test]
fn colliding_names_are_rejected() {
    let names = BaseNames::new(&["v1"], &[]);
    assert!(chart_with_names(ChartKind::Tangent, &names).is_err());
    assert!(chart_with_names(ChartKind::Base, &names).is_ok());
}

#[test]
fn identity_composition() {
    let cs = make_chart(ChartKind::Base, 1, 2);
    let shift = morph(&cs, &[("q1", &v(&cs, "q1") + &(&v(&cs, "th1") * &v(&cs, "th2")))]);
    let id = SuperMorphism::identity(&cs);
    assert_eq!(id.compose(&shift).unwrap(), shift);
    assert_eq!(shift.compose(&id).unwrap(), shift);
}

#[test]
fn soul_shifts_add() {
    let cs = make_chart(ChartKind::Base, 1, 2);
    let pair = &v(&cs, "th1") * &v(&cs, "th2");
    let shift = morph(&cs, &[("q1", &v(&cs, "q1") + &pair)]);
    let twice = shift.compose(&shift).unwrap();
    let want = morph(&cs, &[("q1", &v(&cs, "q1") + &pair.scale_int(2))]);
    assert_eq!(twice, want);
}

#[test]
fn pullback_expands_through_the_soul() {
    // q ↦ q + θ1θ2 pulls q^3 back to q^3 + 3q^2 θ1θ2
    let cs = make_chart(ChartKind::Base, 1, 2);
    let pair = &v(&cs, "th1") * &v(&cs, "th2");
    let shift = morph(&cs, &[("q1", &v(&cs, "q1") + &pair)]);
    let q = v(&cs, "q1");
    let cube = &(&q * &q) * &q;
    let got = shift.pullback(&cube).unwrap();
    let want = &cube + &(&(&q * &q) * &pair).scale_int(3);
    assert_eq!(got, want);
    let s = SuperFunction::scalar(&cs, ScalarExpr::sin(ScalarExpr::var("q1"))).unwrap();
    let got = shift.pullback(&s).unwrap();
    let cosq = ScalarExpr::cos(ScalarExpr::var("q1"));
    assert_eq!(got, &s + &pair.scale(&cosq));
}

#[test]
fn projections_and_imbeddings() {
    let st = make_chart(ChartKind::TangentSuper, 1, 1);
    let tau = canonical_projection(&st).unwrap();
    let base = tau.target().clone();
    assert_eq!(tau.pullback(&v(&base, "q1")).unwrap(), v(&st, "q1"));
    let qt = &v(&base, "q1") * &v(&base, "th1");
    assert_eq!(tau.pullback(&qt).unwrap(), &v(&st, "q1") * &v(&st, "th1"));
    let t1 = tau.pullback(&v(&base, "th1")).unwrap();
    assert!((&t1 * &t1).is_zero());

    let phi = canonical_imbedding(&st, ChartKind::Tangent).unwrap();
    let tm = phi.source().clone();
    assert!(phi.pullback(&v(&st, "pv1")).unwrap().is_zero());
    assert_eq!(phi.pullback(&(&v(&st, "v1") + &v(&st, "pz1"))).unwrap(), v(&tm, "v1"));

    let sc = make_chart(ChartKind::CotangentSuper, 1, 1);
    let psi = canonical_imbedding(&sc, ChartKind::Cotangent).unwrap();
    let tc = psi.source().clone();
    let pq = &v(&sc, "p1") * &v(&sc, "q1");
    assert_eq!(psi.pullback(&pq).unwrap(), &v(&tc, "p1") * &v(&tc, "q1"));
    assert!(psi.pullback(&v(&sc, "pp1")).unwrap().is_zero());
}

#[test]
fn parity_violations_rejected() {
    let cs = make_chart(ChartKind::Base, 1, 1);
    let mut named = BTreeMap::new();
    named.insert(String::from("q1"), v(&cs, "th1"));
    assert!(matches!(
        SuperMorphism::from_named(&cs, &cs, &named),
        Err(crate::Error::ParityMismatch { .. })
    ));
}

#[test]
fn induced_identity_is_identity() {
    let cs = make_chart(ChartKind::Base, 2, 2);
    let st = induce_st_transition(&SuperMorphism::identity(&cs)).unwrap();
    assert!(st.is_identity());
}

#[test]
fn induced_soul_shift() {
    let cs = make_chart(ChartKind::Base, 1, 2);
    let pair = &v(&cs, "th1") * &v(&cs, "th2");
    let t = morph(&cs, &[("q1", &v(&cs, "q1") + &pair)]);
    let st = induce_st_transition(&t).unwrap();
    let s = st.source().clone();
    let g = |n: &str| v(&s, n);
    // ∂q'/∂θ1 = θ2, ∂q'/∂θ2 = −θ1
    let want_v = &(&g("v1") - &(&g("th2") * &g("z1"))) + &(&g("th1") * &g("z2"));
    assert_eq!(st.assignment_of("v1").unwrap(), &want_v);
    let want_pv = &(&g("pv1") + &(&g("th2") * &g("pz1"))) - &(&g("th1") * &g("pz2"));
    assert_eq!(st.assignment_of("pv1").unwrap(), &want_pv);
    assert_eq!(st.assignment_of("z1").unwrap(), &g("z1"));

    // chain rule: composing with the induced inverse gives the identity
    let inv = morph(&cs, &[("q1", &v(&cs, "q1") - &pair)]);
    let back = induce_st_transition(&inv).unwrap();
    assert!(st.compose(&back).unwrap().is_identity());
    assert!(back.compose(&st).unwrap().is_identity());
}

fn three_chart() -> Atlas {
    let mut a = Atlas::new("three", 1, 2);
    for id in ["1", "2", "3"] {
        a.add_chart(id, 1, 2).unwrap();
    }
    let cs = a.base_chart();
    let (q, t1, t2) = (v(&cs, "q1"), v(&cs, "th1"), v(&cs, "th2"));
    let mut n12 = BTreeMap::new();
    n12.insert(String::from("q1"), &q + &(&t1 * &t2));
    a.add_transition("1", "2", &n12).unwrap();
    let mut n23 = BTreeMap::new();
    n23.insert(String::from("q1"), &q + &(&(&q * &q) * &q));
    n23.insert(String::from("th1"), &t1 + &(&q * &t2));
    a.add_transition("2", "3", &n23).unwrap();
    // q1 ∘ t23 = q + q^3 + (θ1 + qθ2)θ2 = q + q^3 + θ1θ2
    let mut n13 = BTreeMap::new();
    n13.insert(String::from("q1"), &(&q + &(&(&q * &q) * &q)) + &(&t1 * &t2));
    n13.insert(String::from("th1"), &t1 + &(&q * &t2));
    a.add_transition("1", "3", &n13).unwrap();
    a
}

fn sample_points(k: usize, count: usize) -> Vec<Vec<f64>> {
    // fixed low-discrepancy points in [-1.5, 1.5]
    (0..count)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let x = ((i * 7 + j * 3 + 1) as f64 * 0.618_033_988_75).fract();
                    3.0 * x - 1.5
                })
                .collect()
        })
        .collect()
}

#[test]
fn three_chart_cocycles() {
    let a = three_chart();
    let rep = a.check(&sample_points(1 + 1 + 2, 10)).unwrap();
    assert_eq!(rep.triples.len(), 1);
    let t = &rep.triples[0];
    assert!(t.base_cocycle);
    assert!(t.st_cocycle);
    assert_eq!(t.samples, 10);
    assert!(t.structural_max_error.unwrap() <= 1e-9);
    assert!(rep.transitions.iter().all(|t| t.structural_routes_agree && t.invertible));
    assert!(rep.passed(1e-9));
}

#[test]
fn broken_cocycle_detected() {
    let mut a = Atlas::new("bad", 1, 0);
    for id in ["1", "2", "3"] {
        a.add_chart(id, 1, 0).unwrap();
    }
    let cs = a.base_chart();
    let q = v(&cs, "q1");
    let mut t = BTreeMap::new();
    t.insert(String::from("q1"), q.scale_int(2));
    a.add_transition("1", "2", &t).unwrap();
    a.add_transition("2", "3", &t).unwrap();
    a.add_transition("1", "3", &t).unwrap();
    let rep = a.check(&sample_points(2, 4)).unwrap();
    assert!(!rep.triples[0].base_cocycle);
    assert!(!rep.passed(1e-9));
}

#[test]
fn structural_identity_and_constant_cases() {
    let cs = make_chart(ChartKind::Base, 2, 2);
    let id = structural_transition(&SuperMorphism::identity(&cs)).unwrap();
    let st = make_chart(ChartKind::TangentSuper, 2, 2);
    assert_eq!(id, GradedMatrix::identity(&st, vec![Parity::Odd; 6]));

    let cs = make_chart(ChartKind::Base, 1, 1);
    let t = morph(&cs, &[("q1", v(&cs, "q1").scale_int(2)), ("th1", v(&cs, "th1").scale_int(3))]);
    let m = structural_transition(&t).unwrap();
    let st = m.chart().clone();
    let c = |k: i64| SuperFunction::from_int(&st, k);
    let zero = SuperFunction::zero(&st);
    let want = GradedMatrix::from_rows(
        &st,
        vec![
            vec![c(3), zero.clone(), zero.clone()],
            vec![zero.clone(), c(3), zero.clone()],
            vec![zero.clone(), zero.clone(), c(2)],
        ],
        vec![Parity::Odd; 3],
        vec![Parity::Odd; 3],
    )
    .unwrap();
    assert_eq!(m, want);
    assert_eq!(structural_transition_from_jacobian(&t).unwrap(), want);
}

#[test]
fn batchelor_block() {
    let cs = make_chart(ChartKind::Base, 1, 2);
    let pair = &v(&cs, "th1") * &v(&cs, "th2");
    let t = morph(&cs, &[("q1", &v(&cs, "q1") + &pair)]);
    let m = structural_transition(&t).unwrap();
    let st = m.chart().clone();
    // φ_{12} = 1/2: row πv, columns θ1, θ2 carry −πζ2 and +πζ1
    assert_eq!(m.get(4, 0), &-&v(&st, "pz2"));
    assert_eq!(m.get(4, 1), &v(&st, "pz1"));
    assert_eq!(structural_transition_from_jacobian(&t).unwrap(), m);
}

#[test]
fn body_split_examples() {
    let cs = make_chart(ChartKind::Base, 1, 1);
    let (a, d) = body_split(&SuperMorphism::identity(&cs)).unwrap();
    assert_eq!(a, ScalarMatrix::identity(1));
    assert_eq!(d, ScalarMatrix::identity(1));
    let t = morph(&cs, &[("q1", v(&cs, "q1").scale_int(2)), ("th1", v(&cs, "th1").scale_int(3))]);
    let (a, d) = body_split(&t).unwrap();
    assert_eq!(a.get(0, 0), &ScalarExpr::from_int(2));
    assert_eq!(d.get(0, 0), &ScalarExpr::from_int(3));

    let cs = make_chart(ChartKind::Base, 1, 2);
    let pair = &v(&cs, "th1") * &v(&cs, "th2");
    let t = morph(&cs, &[("q1", &v(&cs, "q1") + &pair)]);
    let (a, d) = body_split(&t).unwrap();
    assert_eq!(a, ScalarMatrix::identity(1));
    assert_eq!(d, ScalarMatrix::identity(2));
}

#[test]
fn singular_transition_rejected() {
    let cs = make_chart(ChartKind::Base, 1, 1);
    let t = morph(&cs, &[("th1", SuperFunction::zero(&cs))]);
    assert_eq!(induce_st_transition(&t), Err(crate::Error::SingularBody));
}

use crate::superalgebra::{GradedMatrix, ScalarMatrix};

/// Random invertible base transition on (1, 2) with polynomial data.
fn transition() -> impl Strategy<Value = SuperMorphism> {
    (1i64..3, -2i64..3, -2i64..3, 1i64..3, -2i64..3, -2i64..3).prop_map(|(a, b, c, d, e, f)| {
        let cs = make_chart(ChartKind::Base, 1, 2);
        let (q, t1, t2) = (v(&cs, "q1"), v(&cs, "th1"), v(&cs, "th2"));
        let qq = &(&q.scale_int(a) + &(&q * &q).scale_int(b)) + &(&t1 * &t2).scale_int(c);
        let th1 = &t1.scale_int(d) + &(&q * &t2).scale_int(e);
        let th2 = &t2 + &t1.scale_int(f);
        morph(&cs, &[("q1", qq), ("th1", th1), ("th2", th2)])
    })
}

fn base_fn() -> impl Strategy<Value = SuperFunction> {
    prop::collection::vec((0u64..4, -3i64..4, 0i32..3), 1..4).prop_map(|ts| {
        let cs = make_chart(ChartKind::Base, 1, 2);
        let mut f = SuperFunction::zero(&cs);
        for (m, c, e) in ts {
            let coeff = ScalarExpr::var("q1").powi(e).unwrap().scale(&crate::scalar::rational(c, 1));
            let mut t = SuperFunction::scalar(&cs, coeff).unwrap();
            if m & 1 != 0 {
                t = &t * &v(&cs, "th1");
            }
            if m & 2 != 0 {
                t = &t * &v(&cs, "th2");
            }
            f = &f + &t;
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pullback_is_a_homomorphism(t in transition(), f in base_fn(), g in base_fn()) {
        let lhs = t.pullback(&(&f * &g)).unwrap();
        let rhs = &t.pullback(&f).unwrap() * &t.pullback(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn induction_is_functorial(a in transition(), b in transition()) {
        let direct = induce_st_transition(&a.compose(&b).unwrap());
        // composite bodies stay invertible: both linear coefficients are nonzero
        let direct = direct.unwrap();
        let split = induce_st_transition(&a).unwrap().compose(&induce_st_transition(&b).unwrap()).unwrap();
        prop_assert_eq!(direct, split);
    }

    #[test]
    fn structural_routes_agree(t in transition()) {
        prop_assert_eq!(structural_transition(&t).unwrap(), structural_transition_from_jacobian(&t).unwrap());
    }

    #[test]
    fn composition_pulls_back_in_reverse(a in transition(), b in transition(), f in base_fn()) {
        let lhs = a.compose(&b).unwrap().pullback(&f).unwrap();
        let rhs = b.pullback(&a.pullback(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
