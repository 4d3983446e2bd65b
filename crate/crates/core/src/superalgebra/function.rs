use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use super::{Chart, Parity};
use crate::error::{Error, Result};
use crate::scalar::{ExprTree, Func, Rational, ScalarExpr};

/// Polynomial in the odd coordinates of a chart with scalar coefficients in
/// its even coordinates. Monomial keys are bitmasks over odd-coordinate
/// numbers; a key stands for the product of its generators in increasing
/// order.
#[derive(Clone, Debug)]
pub struct SuperFunction {
    cs: Chart,
    terms: BTreeMap<u64, ScalarExpr>,
}

impl PartialEq for SuperFunction {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.cs == *other.cs
    }
}

impl Eq for SuperFunction {}

/// True when moving the generators of `b` past those of `a` into sorted
/// order costs an odd number of transpositions.
pub(crate) fn reorder_sign(a: u64, b: u64) -> bool {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j == 63 { 0 } else { a >> (j + 1) };
        count += above.count_ones();
    }
    count % 2 == 1
}

fn mask_bits(mask: u64) -> impl Iterator<Item = u32> {
    let mut rest = mask;
    core::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            Some(j)
        }
    })
}

impl SuperFunction {
    pub fn zero(cs: &Chart) -> Self {
        SuperFunction {
            cs: cs.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(cs: &Chart) -> Self {
        SuperFunction::from_scalar_unchecked(cs, ScalarExpr::one())
    }

    pub fn from_int(cs: &Chart, n: i64) -> Self {
        SuperFunction::from_scalar_unchecked(cs, ScalarExpr::from_int(n))
    }

    pub fn from_rational(cs: &Chart, c: Rational) -> Self {
        SuperFunction::from_scalar_unchecked(cs, ScalarExpr::from_rational(c))
    }

    /// Lifts a scalar; it may not mention odd coordinates of `cs`.
    pub fn scalar(cs: &Chart, e: ScalarExpr) -> Result<Self> {
        for v in e.variables() {
            if let Some(i) = cs.index_of(&v) {
                if cs.parity(i).is_odd() {
                    return Err(Error::OddInCoefficient(String::from(&*v)));
                }
            }
        }
        Ok(SuperFunction::from_scalar_unchecked(cs, e))
    }

    pub(crate) fn from_scalar_unchecked(cs: &Chart, e: ScalarExpr) -> Self {
        SuperFunction::monomial(cs, 0, e)
    }

    pub(crate) fn monomial(cs: &Chart, mask: u64, c: ScalarExpr) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mask, c);
        }
        SuperFunction {
            cs: cs.clone(),
            terms,
        }
    }

    pub(crate) fn from_terms(cs: &Chart, terms: BTreeMap<u64, ScalarExpr>) -> Self {
        SuperFunction {
            cs: cs.clone(),
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// The `i`-th coordinate of the chart as a superfunction.
    pub fn coordinate(cs: &Chart, i: usize) -> Self {
        match cs.odd_bit(i) {
            Some(b) => SuperFunction::monomial(cs, 1u64 << b, ScalarExpr::one()),
            None => SuperFunction::monomial(cs, 0, ScalarExpr::var(cs.name(i))),
        }
    }

    pub fn var(cs: &Chart, name: &str) -> Result<Self> {
        Ok(SuperFunction::coordinate(cs, cs.lookup(name)?))
    }

    pub fn chart(&self) -> &Chart {
        &self.cs
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &ScalarExpr)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mask: u64) -> Option<&ScalarExpr> {
        self.terms.get(&mask)
    }

    /// Chart indices of the odd generators in a monomial, increasing.
    pub fn monomial_coords(&self, mask: u64) -> Vec<usize> {
        mask_bits(mask).map(|b| self.cs.odd_coord(b)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn body(&self) -> ScalarExpr {
        self.terms.get(&0).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    pub fn soul(&self) -> SuperFunction {
        let mut s = self.clone();
        s.terms.remove(&0);
        s
    }

    /// Parity if homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| Parity::from_bits(m.count_ones()));
        let first = match it.next() {
            Some(p) => p,
            None => return Some(Parity::Even),
        };
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous_of(&self, p: Parity) -> bool {
        self.terms
            .keys()
            .all(|m| Parity::from_bits(m.count_ones()) == p)
    }

    pub fn homogeneous_part(&self, p: Parity) -> SuperFunction {
        SuperFunction {
            cs: self.cs.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| Parity::from_bits(m.count_ones()) == p)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn even_part(&self) -> SuperFunction {
        self.homogeneous_part(Parity::Even)
    }

    pub fn odd_part(&self) -> SuperFunction {
        self.homogeneous_part(Parity::Odd)
    }

    /// Largest number of odd generators in a monomial.
    pub fn odd_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        match self.cs.odd_bit(i) {
            Some(b) => self.terms.keys().any(|m| m & (1u64 << b) != 0),
            None => {
                let name = self.cs.name(i);
                self.terms.values().any(|c| c.depends_on(name))
            }
        }
    }

    fn check(&self, other: &SuperFunction) -> Result<()> {
        if alloc::sync::Arc::ptr_eq(&self.cs, &other.cs) {
            return Ok(());
        }
        self.cs.ensure_same(&other.cs)
    }

    pub fn checked_add(&self, other: &SuperFunction) -> Result<SuperFunction> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, *m, c.clone());
        }
        Ok(SuperFunction {
            cs: self.cs.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &SuperFunction) -> Result<SuperFunction> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &SuperFunction) -> Result<SuperFunction> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca * cb;
                let c = if reorder_sign(*ma, *mb) { -c } else { c };
                add_into(&mut terms, ma | mb, c);
            }
        }
        Ok(SuperFunction {
            cs: self.cs.clone(),
            terms,
        })
    }

    pub fn scale(&self, k: &ScalarExpr) -> SuperFunction {
        if k.is_zero() {
            return SuperFunction::zero(&self.cs);
        }
        SuperFunction::from_terms(
            &self.cs,
            self.terms.iter().map(|(m, c)| (*m, k * c)).collect(),
        )
    }

    pub fn scale_int(&self, k: i64) -> SuperFunction {
        self.scale(&ScalarExpr::from_int(k))
    }

    /// Left derivative with respect to the `i`-th coordinate.
    pub fn derivative(&self, i: usize) -> SuperFunction {
        match self.cs.odd_bit(i) {
            None => {
                let name = self.cs.name(i);
                SuperFunction::from_terms(
                    &self.cs,
                    self.terms
                        .iter()
                        .map(|(m, c)| (*m, c.derivative(name)))
                        .collect(),
                )
            }
            Some(b) => {
                let bit = 1u64 << b;
                let below = bit - 1;
                let mut terms = BTreeMap::new();
                for (m, c) in &self.terms {
                    if m & bit == 0 {
                        continue;
                    }
                    let c = if (m & below).count_ones() % 2 == 1 {
                        -c
                    } else {
                        c.clone()
                    };
                    terms.insert(m & !bit, c);
                }
                SuperFunction {
                    cs: self.cs.clone(),
                    terms,
                }
            }
        }
    }

    pub fn derivative_by_name(&self, name: &str) -> Result<SuperFunction> {
        Ok(self.derivative(self.cs.lookup(name)?))
    }

    /// Inverse through the finite geometric series in the soul.
    pub fn invert(&self) -> Result<SuperFunction> {
        let b = self.body();
        if b.is_zero() {
            return Err(Error::NonInvertible);
        }
        let binv = b.recip()?;
        let x = self.soul().scale(&-&binv);
        let mut acc = SuperFunction::one(&self.cs);
        let mut pow = SuperFunction::one(&self.cs);
        for _ in 0..self.cs.odd_count() {
            pow = &pow * &x;
            if pow.is_zero() {
                break;
            }
            acc = &acc + &pow;
        }
        Ok(acc.scale(&binv))
    }

    pub fn checked_div(&self, other: &SuperFunction) -> Result<SuperFunction> {
        self.checked_mul(&other.invert()?)
    }

    pub fn powi(&self, e: i32) -> Result<SuperFunction> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = SuperFunction::one(&self.cs);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// `f(body + soul)` expanded as a finite Taylor series in the soul.
    pub fn apply_func(&self, func: Func) -> SuperFunction {
        let b = self.body();
        let s = self.soul();
        let sign = |k: usize, e: ScalarExpr| if k % 2 == 1 { -e } else { e };
        let nth = |k: usize| -> ScalarExpr {
            match func {
                Func::Exp => ScalarExpr::exp(b.clone()),
                Func::Sin => match k % 4 {
                    0 | 2 => sign(k / 2, ScalarExpr::sin(b.clone())),
                    _ => sign(k / 2, ScalarExpr::cos(b.clone())),
                },
                Func::Cos => match k % 4 {
                    0 | 2 => sign(k / 2, ScalarExpr::cos(b.clone())),
                    _ => sign(k / 2 + 1, ScalarExpr::sin(b.clone())),
                },
            }
        };
        let mut acc = SuperFunction::from_scalar_unchecked(&self.cs, nth(0));
        let mut pow = SuperFunction::one(&self.cs);
        let mut fact = BigInt::one();
        for k in 1..=self.cs.odd_count() {
            pow = &pow * &s;
            if pow.is_zero() {
                break;
            }
            fact *= k;
            let c = nth(k).scale(&Rational::new(BigInt::one(), fact.clone()));
            acc = &acc + &pow.scale(&c);
        }
        acc
    }

    /// Applies a fallible map to every coefficient.
    pub fn try_map_coefficients(
        &self,
        mut f: impl FnMut(&ScalarExpr) -> Result<ScalarExpr>,
    ) -> Result<SuperFunction> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, f(c)?);
        }
        Ok(SuperFunction::from_terms(&self.cs, terms))
    }

    /// Same function written over another chart containing all coordinates
    /// this one mentions (matched by name and parity).
    pub fn reexpress(&self, target: &Chart) -> Result<SuperFunction> {
        if *self.cs == **target {
            return Ok(SuperFunction {
                cs: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let used = self.terms.keys().fold(0u64, |a, m| a | m);
        let mut bitmap = alloc::vec![0u32; self.cs.odd_count()];
        for b in mask_bits(used) {
            let name = self.cs.name(self.cs.odd_coord(b));
            let j = target.lookup(name)?;
            match target.odd_bit(j) {
                Some(tb) => bitmap[b as usize] = tb,
                None => return Err(Error::ParityMismatch { coordinate: String::from(name) }),
            }
        }
        for v in self.terms.values().flat_map(|c| c.variables()) {
            if let Some(j) = target.index_of(&v) {
                if target.parity(j).is_odd() {
                    return Err(Error::ParityMismatch { coordinate: String::from(&*v) });
                }
            } else if self.cs.index_of(&v).is_some() {
                return Err(Error::UnknownCoordinate(String::from(&*v)));
            }
        }
        let mut out = SuperFunction::zero(target);
        for (m, c) in &self.terms {
            // Generators are re-sorted under the new numbering.
            let mut acc = SuperFunction::monomial(target, 0, c.clone());
            for b in mask_bits(*m) {
                acc = &acc * &SuperFunction::monomial(target, 1u64 << bitmap[b as usize], ScalarExpr::one());
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Numeric value of every coefficient, keyed by monomial.
    pub fn eval_coefficients(
        &self,
        env: &dyn Fn(&str) -> Option<f64>,
    ) -> Option<BTreeMap<u64, f64>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            out.insert(*m, c.eval_f64(env)?);
        }
        Some(out)
    }

    /// Reads an expression tree over the chart's coordinates; odd names
    /// become Grassmann generators.
    pub fn from_tree(cs: &Chart, t: &ExprTree) -> Result<SuperFunction> {
        Ok(match t {
            ExprTree::Num(c) => SuperFunction::from_rational(cs, c.clone()),
            ExprTree::Var(v) => SuperFunction::var(cs, v)?,
            ExprTree::Neg(a) => -&SuperFunction::from_tree(cs, a)?,
            ExprTree::Add(xs) => {
                let mut acc = SuperFunction::zero(cs);
                for x in xs {
                    acc = &acc + &SuperFunction::from_tree(cs, x)?;
                }
                acc
            }
            ExprTree::Sub(a, b) => &SuperFunction::from_tree(cs, a)? - &SuperFunction::from_tree(cs, b)?,
            ExprTree::Mul(xs) => {
                let mut acc = SuperFunction::one(cs);
                for x in xs {
                    acc = &acc * &SuperFunction::from_tree(cs, x)?;
                }
                acc
            }
            ExprTree::Div(a, b) => SuperFunction::from_tree(cs, a)?.checked_div(&SuperFunction::from_tree(cs, b)?)?,
            ExprTree::Pow(a, e) => {
                let e = i32::try_from(*e).map_err(|_| crate::scalar::ScalarError::BadExponent)?;
                SuperFunction::from_tree(cs, a)?.powi(e)?
            }
            ExprTree::Call(f, a) => SuperFunction::from_tree(cs, a)?.apply_func(*f),
        })
    }

    pub fn to_tree(&self) -> ExprTree {
        if self.terms.is_empty() {
            return ExprTree::int(0);
        }
        let mut keys: Vec<u64> = self.terms.keys().copied().collect();
        keys.sort_by_key(|m| (m.count_ones(), mask_bits(*m).collect::<Vec<_>>()));
        let mut parts = Vec::new();
        for m in keys {
            let c = &self.terms[&m];
            let (neg, mag) = match c.to_tree() {
                ExprTree::Neg(inner) => (true, *inner),
                t => (false, t),
            };
            let mut factors = Vec::new();
            if m == 0 || !(mag == ExprTree::int(1)) {
                match mag {
                    ExprTree::Mul(xs) => factors.extend(xs),
                    t => factors.push(t),
                }
            }
            for i in self.monomial_coords(m) {
                factors.push(ExprTree::var(self.cs.name(i)));
            }
            let t = if factors.len() == 1 {
                factors.pop().unwrap_or(ExprTree::int(1))
            } else {
                ExprTree::Mul(factors)
            };
            parts.push(if neg { ExprTree::Neg(Box::new(t)) } else { t });
        }
        if parts.len() == 1 {
            parts.pop().unwrap_or(ExprTree::int(0))
        } else {
            ExprTree::Add(parts)
        }
    }
}

fn add_into(terms: &mut BTreeMap<u64, ScalarExpr>, m: u64, c: ScalarExpr) {
    if c.is_zero() {
        return;
    }
    match terms.remove(&m) {
        Some(old) => {
            let s = &old + &c;
            if !s.is_zero() {
                terms.insert(m, s);
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_tree(), f)
    }
}

impl Add for &SuperFunction {
    type Output = SuperFunction;
    fn add(self, rhs: &SuperFunction) -> SuperFunction {
        self.checked_add(rhs).expect("superfunctions over different charts")
    }
}

impl Sub for &SuperFunction {
    type Output = SuperFunction;
    fn sub(self, rhs: &SuperFunction) -> SuperFunction {
        self.checked_sub(rhs).expect("superfunctions over different charts")
    }
}

impl Mul for &SuperFunction {
    type Output = SuperFunction;
    fn mul(self, rhs: &SuperFunction) -> SuperFunction {
        self.checked_mul(rhs).expect("superfunctions over different charts")
    }
}

impl Neg for &SuperFunction {
    type Output = SuperFunction;
    fn neg(self) -> SuperFunction {
        SuperFunction {
            cs: self.cs.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for SuperFunction {
    type Output = SuperFunction;
    fn neg(self) -> SuperFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SuperFunction {
            type Output = SuperFunction;
            fn $m(self, rhs: SuperFunction) -> SuperFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SuperFunction> for SuperFunction {
            type Output = SuperFunction;
            fn $m(self, rhs: &SuperFunction) -> SuperFunction {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
