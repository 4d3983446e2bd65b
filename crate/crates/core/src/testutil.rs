//! Random superfunctions and morphisms shared by the unit tests.

use alloc::vec::Vec;
use proptest::prelude::*;

use crate::charts::{make_chart, ChartKind, SuperMorphism};
use crate::scalar::{rational, ScalarExpr};
use crate::superalgebra::{Chart, Parity, SuperFunction};

pub type Spec = Vec<(u64, i64, usize, u32)>;

pub fn v(cs: &Chart, n: &str) -> SuperFunction {
    SuperFunction::var(cs, n).unwrap()
}

/// Σ c·x^k·(odd monomial) on `cs`, keeping only terms of parity `p` when
/// given.
pub fn build(cs: &Chart, spec: &Spec, p: Option<Parity>) -> SuperFunction {
    let evens: Vec<usize> = (0..cs.len()).filter(|&i| !cs.parity(i).is_odd()).collect();
    let odd = cs.odd_count() as u32;
    let mut f = SuperFunction::zero(cs);
    for &(mask, c, e, k) in spec {
        let mask = mask & ((1u64 << odd) - 1);
        if let Some(p) = p {
            if Parity::from_bits(mask.count_ones()) != p {
                continue;
            }
        }
        let mut t = SuperFunction::from_rational(cs, rational(c, 1));
        if !evens.is_empty() {
            let x = ScalarExpr::var(cs.name(evens[e % evens.len()])).powi(k as i32).unwrap();
            t = t.scale(&x);
        }
        for b in (0..odd).filter(|b| mask & (1 << b) != 0) {
            t = &t * &SuperFunction::coordinate(cs, cs.odd_coord(b));
        }
        f = &f + &t;
    }
    f
}

pub fn spec() -> impl Strategy<Value = Spec> {
    prop::collection::vec((0u64..64, -3i64..4, 0usize..6, 0u32..3), 0..4)
}

pub fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

/// Invertible morphisms of the (1, 2) base chart.
pub fn base_morphism() -> impl Strategy<Value = SuperMorphism> {
    (1i64..3, -2i64..3, -2i64..3, 1i64..3, -2i64..3, -2i64..3).prop_map(|(a, b, c, d, e, f)| {
        let cs = make_chart(ChartKind::Base, 1, 2);
        let (q, t1, t2) = (v(&cs, "q1"), v(&cs, "th1"), v(&cs, "th2"));
        let qq = &(&q.scale_int(a) + &(&q * &q).scale_int(b)) + &(&t1 * &t2).scale_int(c);
        let th1 = &t1.scale_int(d) + &(&q * &t2).scale_int(e);
        let th2 = &t2 + &t1.scale_int(f);
        SuperMorphism::new(&cs, &cs, alloc::vec![qq, th1, th2]).unwrap()
    })
}

/// Homogeneous field of parity `p` whose components cycle through `specs`.
pub fn field(cs: &Chart, specs: &[Spec], p: Parity) -> crate::fields::SuperVectorField {
    let comps = (0..cs.len())
        .map(|a| build(cs, &specs[a % specs.len()], Some(p + cs.parity(a))))
        .collect();
    crate::fields::SuperVectorField::new(cs, comps).unwrap()
}
