//! Seeded random superfunctions, morphisms, forms and matrices for the
//! verification suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supermech_core::charts::SuperMorphism;
use supermech_core::forms::GradedForm;
use supermech_core::scalar::{ExprTree, Func};
use supermech_core::superalgebra::ScalarMatrix;
use supermech_core::{Chart, GradedMatrix, Parity, Rational, ScalarExpr, SuperFunction};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn parity(&mut self) -> Parity {
        if self.rng.gen_bool(0.5) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// c · x^k with c in [-3, 3] and x an even coordinate of `cs`.
    fn coefficient(&mut self, cs: &Chart) -> ScalarExpr {
        let c = ScalarExpr::from_int(self.int(-3, 3));
        let evens: Vec<usize> = (0..cs.len()).filter(|&i| !cs.parity(i).is_odd()).collect();
        if evens.is_empty() {
            return c;
        }
        let x = cs.name(evens[self.rng.gen_range(0..evens.len())]);
        let k = self.rng.gen_range(0..3);
        &c * &ScalarExpr::var(x).powi(k).expect("nonnegative power")
    }

    /// Sum of up to `terms` random monomials, restricted to parity `p` if
    /// given.
    pub fn superfunction(&mut self, cs: &Chart, p: Option<Parity>, terms: usize) -> SuperFunction {
        let odd = cs.odd_count() as u32;
        let mut f = SuperFunction::zero(cs);
        for _ in 0..self.rng.gen_range(0..=terms) {
            let mut mask: u64 = self.rng.gen_range(0..(1u64 << odd));
            if let Some(p) = p {
                if Parity::from_bits(mask.count_ones()) != p {
                    if odd == 0 {
                        continue;
                    }
                    mask ^= 1 << self.rng.gen_range(0..odd);
                }
            }
            let mut t = SuperFunction::scalar(cs, self.coefficient(cs)).expect("even coefficient");
            for b in (0..odd).filter(|b| mask & (1 << b) != 0) {
                t = &t * &SuperFunction::coordinate(cs, cs.odd_coord(b));
            }
            f = &f + &t;
        }
        f
    }

    /// A homogeneous superfunction and its parity.
    pub fn homogeneous(&mut self, cs: &Chart, terms: usize) -> (SuperFunction, Parity) {
        let p = self.parity();
        (self.superfunction(cs, Some(p), terms), p)
    }

    /// Invertible superfunction: nonzero constant body plus a soul.
    pub fn invertible(&mut self, cs: &Chart) -> SuperFunction {
        let mut b = self.int(-3, 3);
        if b == 0 {
            b = 2;
        }
        let f = self.superfunction(cs, Some(Parity::Even), 3);
        &SuperFunction::from_int(cs, b) + &f.soul()
    }

    /// Parity-preserving morphism of a chart into itself.
    pub fn morphism(&mut self, cs: &Chart) -> SuperMorphism {
        let assign = (0..cs.len())
            .map(|i| {
                let x = SuperFunction::coordinate(cs, i);
                &x + &self.superfunction(cs, Some(cs.parity(i)), 2)
            })
            .collect();
        SuperMorphism::new(cs, cs, assign).expect("parities match by construction")
    }

    /// Random form with terms of degree at most `max_degree`.
    pub fn form(&mut self, cs: &Chart, max_degree: usize, terms: usize) -> GradedForm {
        let mut w = GradedForm::zero(cs);
        for _ in 0..self.rng.gen_range(1..=terms) {
            let k = self.rng.gen_range(0..=max_degree);
            let seq: Vec<usize> = (0..k).map(|_| self.rng.gen_range(0..cs.len())).collect();
            let f = self.superfunction(cs, None, 2);
            w = w.checked_add(&GradedForm::monomial(&f, &seq)).expect("same chart");
        }
        w
    }

    /// One-form Σ dx^a f_a with every coefficient of parity |a| + `p`.
    pub fn one_form(&mut self, cs: &Chart, p: Parity) -> GradedForm {
        let coeffs: Vec<SuperFunction> =
            (0..cs.len()).map(|a| self.superfunction(cs, Some(cs.parity(a) + p), 2)).collect();
        GradedForm::one_form(cs, &coeffs).expect("length matches chart")
    }

    /// Even graded matrix with an invertible integer body.
    pub fn graded_matrix(&mut self, cs: &Chart, parities: &[Parity]) -> GradedMatrix {
        let n = parities.len();
        loop {
            let mut rows = Vec::with_capacity(n);
            let mut body = ScalarMatrix::zeros(n, n);
            for i in 0..n {
                let mut row = Vec::with_capacity(n);
                for j in 0..n {
                    let p = parities[i] + parities[j];
                    let soul = self.superfunction(cs, Some(p), 2).soul();
                    let e = if p == Parity::Even {
                        let b = self.int(-2, 2);
                        body.set(i, j, ScalarExpr::from_int(b));
                        &SuperFunction::from_int(cs, b) + &soul
                    } else {
                        soul
                    };
                    row.push(e);
                }
                rows.push(row);
            }
            if body.inverse().is_ok() {
                return GradedMatrix::from_rows(cs, rows, parities.to_vec(), parities.to_vec())
                    .expect("square rows on one chart");
            }
        }
    }

    /// Random expression tree over `vars`.
    pub fn tree(&mut self, vars: &[&str], depth: u32) -> ExprTree {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return if self.rng.gen_bool(0.5) {
                ExprTree::var(vars.choose(&mut self.rng).expect("nonempty pool"))
            } else {
                let d = self.int(1, 4);
                ExprTree::Num(Rational::new(self.int(-5, 5).into(), d.into()))
            };
        }
        let sub = |g: &mut Gen| Box::new(g.tree(vars, depth - 1));
        match self.rng.gen_range(0..7) {
            0 => ExprTree::Add(vec![*sub(self), *sub(self)]),
            1 => ExprTree::Sub(sub(self), sub(self)),
            2 => ExprTree::Mul(vec![*sub(self), *sub(self)]),
            3 => ExprTree::Div(sub(self), sub(self)),
            4 => ExprTree::Pow(sub(self), self.int(0, 3)),
            5 => ExprTree::Neg(sub(self)),
            _ => {
                let f = *[Func::Sin, Func::Cos, Func::Exp].choose(&mut self.rng).expect("nonempty");
                ExprTree::Call(f, sub(self))
            }
        }
    }
}
