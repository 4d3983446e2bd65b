use super::*;
use alloc::boxed::Box;
use alloc::vec;
use proptest::prelude::*;

fn q() -> ScalarExpr {
    ScalarExpr::var("q")
}

fn p() -> ScalarExpr {
    ScalarExpr::var("p")
}

fn int(n: i64) -> ScalarExpr {
    ScalarExpr::from_int(n)
}

#[test]
fn like_terms_merge() {
    assert_eq!(&q() + &q(), &int(2) * &q());
}

#[test]
fn polynomial_identity_collapses() {
    let lhs = &(&q() * &(&q() + &int(1))) - &q().powi(2).unwrap();
    assert_eq!(lhs, q());
}

#[test]
fn annihilation_by_zero() {
    let e = &ScalarExpr::sin(q()) * &ScalarExpr::zero();
    assert!(e.is_zero());
}

#[test]
fn derivative_table() {
    assert_eq!(q().powi(2).unwrap().derivative("q"), &int(2) * &q());
    assert_eq!(ScalarExpr::sin(q()).derivative("q"), ScalarExpr::cos(q()));
    assert_eq!((&p() * &q()).derivative("q"), p());
    assert_eq!(
        ScalarExpr::cos(q()).derivative("q"),
        -ScalarExpr::sin(q())
    );
    let e = ScalarExpr::exp(&int(2) * &q());
    assert_eq!(e.derivative("q"), &int(2) * &e);
}

#[test]
fn quotient_rule() {
    let e = q().recip().unwrap();
    let d = e.derivative("q");
    assert_eq!(d, -q().powi(-2).unwrap());
}

#[test]
fn substitution() {
    let mut b = BTreeMap::new();
    b.insert(String::from("q"), &p() + &int(1));
    let got = q().powi(2).unwrap().substitute(&b).unwrap();
    let want = &(&p().powi(2).unwrap() + &(&int(2) * &p())) + &int(1);
    assert_eq!(got, want);

    assert_eq!(q().substitute(&BTreeMap::new()).unwrap(), q());

    let mut b = BTreeMap::new();
    b.insert(String::from("q"), ScalarExpr::zero());
    let r = ScalarExpr::var("r");
    assert!((&q() * &r).substitute(&b).unwrap().is_zero());
}

#[test]
fn substitution_is_simultaneous() {
    let mut b = BTreeMap::new();
    b.insert(String::from("q"), p());
    b.insert(String::from("p"), q());
    let e = &q() - &(&int(2) * &p());
    assert_eq!(e.substitute(&b).unwrap(), &p() - &(&int(2) * &q()));
}

#[test]
fn substitution_can_hit_a_pole() {
    let mut b = BTreeMap::new();
    b.insert(String::from("q"), ScalarExpr::zero());
    assert_eq!(
        q().recip().unwrap().substitute(&b),
        Err(ScalarError::DivisionByZero)
    );
}

#[test]
fn zero_tests() {
    assert!(is_zero(&(&q() - &q())));
    let s = ScalarExpr::sin(q());
    let c = ScalarExpr::cos(q());
    let pyth = &(&s.powi(2).unwrap() + &c.powi(2).unwrap()) - &int(1);
    assert!(!is_zero(&pyth));
    let half = ScalarExpr::from_ratio(3, 6);
    assert!(is_zero(&(&half - &ScalarExpr::from_ratio(1, 2))));
}

#[test]
fn kernels_fold_at_zero() {
    assert!(ScalarExpr::sin(ScalarExpr::zero()).is_zero());
    assert!(ScalarExpr::cos(ScalarExpr::zero()).is_one());
    assert!(ScalarExpr::exp(ScalarExpr::zero()).is_one());
}

#[test]
fn rational_functions_reduce() {
    let num = &q().powi(2).unwrap() - &int(1);
    let den = &q() - &int(1);
    assert_eq!(num.checked_div(&den).unwrap(), &q() + &int(1));

    let a = (&q() + &p()).recip().unwrap();
    let b = &a * &(&q() + &p());
    assert!(b.is_one());
}

#[test]
fn division_by_zero_is_reported() {
    assert_eq!(q().checked_div(&ScalarExpr::zero()), Err(ScalarError::DivisionByZero));
    let t = ExprTree::Div(Box::new(ExprTree::int(1)), Box::new(ExprTree::int(0)));
    assert_eq!(t.normalize(), Err(ScalarError::DivisionByZero));
}

#[test]
fn display_samples() {
    let e = &(&ScalarExpr::from_ratio(1, 2) * &q().powi(2).unwrap()) - &p();
    let s = alloc::format!("{e}");
    assert_eq!(s, "1/2*q^2 - p");
    let r = (&q() + &int(1)).recip().unwrap();
    assert_eq!(alloc::format!("{r}"), "1/(q + 1)");
    assert_eq!(alloc::format!("{}", ScalarExpr::from_int(-3)), "-3");
}

fn leaf() -> impl Strategy<Value = ExprTree> {
    prop_oneof![
        (-4i64..5).prop_map(ExprTree::int),
        (-4i64..5, 1i64..4).prop_map(|(n, d)| ExprTree::Num(rational(n, d))),
        prop::sample::select(vec!["q", "p", "r"]).prop_map(ExprTree::var),
    ]
}

fn tree() -> impl Strategy<Value = ExprTree> {
    leaf().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(ExprTree::Add),
            prop::collection::vec(inner.clone(), 2..3).prop_map(ExprTree::Mul),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| ExprTree::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), 0i64..3).prop_map(|(a, e)| ExprTree::Pow(Box::new(a), e)),
            inner.clone().prop_map(|a| ExprTree::Neg(Box::new(a))),
        ]
    })
}

fn rational_tree() -> impl Strategy<Value = ExprTree> {
    (tree(), tree()).prop_map(|(a, b)| {
        // shift the denominator away from zero on most of the sample box
        let den = ExprTree::Add(vec![
            ExprTree::Pow(Box::new(b), 2),
            ExprTree::int(1),
        ]);
        ExprTree::Div(Box::new(a), Box::new(den))
    })
}

fn env_from(vals: [f64; 3]) -> impl Fn(&str) -> Option<f64> {
    move |name| match name {
        "q" => Some(vals[0]),
        "p" => Some(vals[1]),
        "r" => Some(vals[2]),
        _ => None,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_and_product_commute(a in tree(), b in tree()) {
        let x = a.normalize().unwrap();
        let y = b.normalize().unwrap();
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
    }

    #[test]
    fn normalize_is_idempotent(a in rational_tree()) {
        let n = a.normalize().unwrap();
        prop_assert_eq!(n.to_tree().normalize().unwrap(), n);
    }

    #[test]
    fn derivative_is_additive(a in rational_tree(), b in tree()) {
        let x = a.normalize().unwrap();
        let y = b.normalize().unwrap();
        prop_assert_eq!((&x + &y).derivative("q"), &x.derivative("q") + &y.derivative("q"));
    }

    #[test]
    fn product_rule(a in tree(), b in rational_tree()) {
        let x = a.normalize().unwrap();
        let y = b.normalize().unwrap();
        let lhs = (&x * &y).derivative("p");
        let rhs = &(&x.derivative("p") * &y) + &(&x * &y.derivative("p"));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn numeric_agreement(a in rational_tree(), v in prop::array::uniform3(-2.0f64..2.0)) {
        let n = a.normalize().unwrap();
        let env = env_from(v);
        let direct = a.eval_f64(&env);
        let canon = n.eval_f64(&env);
        if let (Some(x), Some(y)) = (direct, canon) {
            prop_assert!(close(x, y), "{} vs {}", x, y);
        }
    }
}
