//! Exact scalar expressions in named even variables.
//!
//! A [`ScalarExpr`] is always kept in canonical form: a reduced quotient of
//! two polynomials over the rationals whose indeterminates are variables and
//! `sin`/`cos`/`exp` kernels of canonical arguments. On the rational subset
//! (no kernels) two expressions are equal as functions iff they are equal as
//! values of this type. Kernels are treated as independent indeterminates,
//! so identities such as `sin(q)^2 + cos(q)^2 = 1` are not discovered; zero
//! tests are sound but incomplete there.

mod poly;
mod tree;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use poly::{Atom, Monomial, Poly};
pub use tree::{ExprTree, Func};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Errors raised while building scalar expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    DivisionByZero,
    /// A symbolic exponent or an exponent that does not fit in `i32`.
    BadExponent,
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::DivisionByZero => f.write_str("division by zero"),
            ScalarError::BadExponent => f.write_str("exponent out of range"),
        }
    }
}

impl core::error::Error for ScalarError {}

/// Canonical rational function over variables and transcendental kernels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        ScalarExpr::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ScalarExpr::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        ScalarExpr::from_rational(rational(n, d))
    }

    pub fn from_rational(c: Rational) -> Self {
        ScalarExpr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn var(name: &str) -> Self {
        ScalarExpr::from_poly(Poly::atom(Atom::Var(Arc::from(name))))
    }

    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn sin(arg: ScalarExpr) -> Self {
        if arg.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr::from_poly(Poly::atom(Atom::Sin(Arc::new(arg))))
    }

    pub fn cos(arg: ScalarExpr) -> Self {
        if arg.is_zero() {
            return ScalarExpr::one();
        }
        ScalarExpr::from_poly(Poly::atom(Atom::Cos(Arc::new(arg))))
    }

    pub fn exp(arg: ScalarExpr) -> Self {
        if arg.is_zero() {
            return ScalarExpr::one();
        }
        ScalarExpr::from_poly(Poly::atom(Atom::Exp(Arc::new(arg))))
    }

    pub fn apply(func: Func, arg: ScalarExpr) -> Self {
        match func {
            Func::Sin => ScalarExpr::sin(arg),
            Func::Cos => ScalarExpr::cos(arg),
            Func::Exp => ScalarExpr::exp(arg),
        }
    }

    fn from_parts(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(ScalarExpr::zero());
        }
        if let Some(c) = den.as_constant() {
            return Ok(ScalarExpr::from_poly(num.scale(&c.recip())));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).unwrap_or(num),
                den.div_exact(&g).unwrap_or(den),
            )
        };
        if let Some(c) = den.as_constant() {
            return Ok(ScalarExpr::from_poly(num.scale(&c.recip())));
        }
        if let Some(lc) = den.leading_coefficient().cloned() {
            if !lc.is_one() {
                let k = lc.recip();
                num = num.scale(&k);
                den = den.scale(&k);
            }
        }
        Ok(ScalarExpr { num, den })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// True when no `sin`/`cos`/`exp` kernel occurs anywhere.
    pub fn is_rational_function(&self) -> bool {
        let no_kernel = |p: &Poly| p.atoms().iter().all(|a| matches!(a, Atom::Var(_)));
        no_kernel(&self.num) && no_kernel(&self.den)
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.num.depends_on(name) || self.den.depends_on(name)
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        for p in [&self.num, &self.den] {
            for a in p.atoms() {
                a.collect_vars(out);
            }
        }
    }

    /// Names of all variables occurring, including inside kernels.
    pub fn variables(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn checked_div(&self, other: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(c) = other.as_rational() {
            return Ok(self.scale(&c.recip()));
        }
        ScalarExpr::from_parts(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<ScalarExpr, ScalarError> {
        ScalarExpr::one().checked_div(self)
    }

    pub fn scale(&self, k: &Rational) -> ScalarExpr {
        if k.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn powi(&self, e: i32) -> Result<ScalarExpr, ScalarError> {
        if e >= 0 {
            let e = e as u32;
            if self.den.is_one() {
                return Ok(ScalarExpr::from_poly(self.num.pow(e)));
            }
            return Ok(ScalarExpr {
                num: self.num.pow(e),
                den: self.den.pow(e),
            });
        }
        let e = e.unsigned_abs();
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        ScalarExpr::from_parts(self.den.pow(e), self.num.pow(e))
    }

    /// Partial derivative with respect to the variable `x`; kernels are
    /// differentiated with the chain rule.
    pub fn derivative(&self, x: &str) -> ScalarExpr {
        if !self.depends_on(x) {
            return ScalarExpr::zero();
        }
        let dn = poly_derivative(&self.num, x);
        if self.den.is_one() {
            return dn;
        }
        let dd = poly_derivative(&self.den, x);
        let n = ScalarExpr::from_poly(self.num.clone());
        let d = ScalarExpr::from_poly(self.den.clone());
        let top = &(&dn * &d) - &(&n * &dd);
        let bottom = &d * &d;
        top.checked_div(&bottom)
            .expect("denominator of a canonical expression is nonzero")
    }

    /// Simultaneous substitution of variables, followed by normalization.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<String, ScalarExpr>,
    ) -> Result<ScalarExpr, ScalarError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let vars = self.variables();
        if !vars.iter().any(|v| bindings.contains_key(&**v)) {
            return Ok(self.clone());
        }
        let mut cache: BTreeMap<Atom, ScalarExpr> = BTreeMap::new();
        let n = eval_poly(&self.num, bindings, &mut cache)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = eval_poly(&self.den, bindings, &mut cache)?;
        n.checked_div(&d)
    }

    /// Numeric value, or `None` if a variable is unbound or a pole is hit.
    pub fn eval_f64(&self, env: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
        let n = eval_poly_f64(&self.num, env)?;
        let d = eval_poly_f64(&self.den, env)?;
        if d == 0.0 {
            return None;
        }
        Some(n / d)
    }

    /// Canonical syntax tree; printing it yields re-parseable text.
    pub fn to_tree(&self) -> ExprTree {
        let n = poly_to_tree(&self.num);
        if self.den.is_one() {
            n
        } else {
            ExprTree::Div(alloc::boxed::Box::new(n), alloc::boxed::Box::new(poly_to_tree(&self.den)))
        }
    }
}

fn atom_derivative(a: &Atom, x: &str) -> ScalarExpr {
    match a {
        Atom::Var(v) => {
            if &**v == x {
                ScalarExpr::one()
            } else {
                ScalarExpr::zero()
            }
        }
        Atom::Sin(u) => {
            let du = u.derivative(x);
            if du.is_zero() {
                return du;
            }
            &ScalarExpr::cos((**u).clone()) * &du
        }
        Atom::Cos(u) => {
            let du = u.derivative(x);
            if du.is_zero() {
                return du;
            }
            -(&ScalarExpr::sin((**u).clone()) * &du)
        }
        Atom::Exp(u) => {
            let du = u.derivative(x);
            if du.is_zero() {
                return du;
            }
            &ScalarExpr::exp((**u).clone()) * &du
        }
    }
}

fn poly_derivative(p: &Poly, x: &str) -> ScalarExpr {
    let mut out = ScalarExpr::zero();
    for (m, c) in p.terms() {
        for (k, (a, e)) in m.factors().iter().enumerate() {
            if !a.depends_on(x) {
                continue;
            }
            let da = atom_derivative(a, x);
            if da.is_zero() {
                continue;
            }
            let mut rest: Vec<(Atom, u32)> = m.factors().to_vec();
            if *e == 1 {
                rest.remove(k);
            } else {
                rest[k].1 = e - 1;
            }
            let coeff = c * Rational::from_integer(BigInt::from(*e));
            let mut base = Poly::zero();
            base.add_term(Monomial(rest), coeff);
            out = &out + &(&ScalarExpr::from_poly(base) * &da);
        }
    }
    out
}

fn eval_atom(
    a: &Atom,
    bindings: &BTreeMap<String, ScalarExpr>,
) -> Result<ScalarExpr, ScalarError> {
    Ok(match a {
        Atom::Var(v) => match bindings.get(&**v) {
            Some(e) => e.clone(),
            None => ScalarExpr::var(v),
        },
        Atom::Sin(u) => ScalarExpr::sin(u.substitute(bindings)?),
        Atom::Cos(u) => ScalarExpr::cos(u.substitute(bindings)?),
        Atom::Exp(u) => ScalarExpr::exp(u.substitute(bindings)?),
    })
}

fn eval_poly(
    p: &Poly,
    bindings: &BTreeMap<String, ScalarExpr>,
    cache: &mut BTreeMap<Atom, ScalarExpr>,
) -> Result<ScalarExpr, ScalarError> {
    let mut acc = ScalarExpr::zero();
    for (m, c) in p.terms() {
        let mut term = ScalarExpr::from_rational(c.clone());
        for (a, e) in m.factors() {
            let v = match cache.get(a) {
                Some(v) => v.clone(),
                None => {
                    let v = eval_atom(a, bindings)?;
                    cache.insert(a.clone(), v.clone());
                    v
                }
            };
            term = &term * &v.powi(*e as i32)?;
            if term.is_zero() {
                break;
            }
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

fn eval_poly_f64(p: &Poly, env: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut term = c.to_f64()?;
        for (a, e) in m.factors() {
            let v = match a {
                Atom::Var(v) => env(v)?,
                Atom::Sin(u) => libm::sin(u.eval_f64(env)?),
                Atom::Cos(u) => libm::cos(u.eval_f64(env)?),
                Atom::Exp(u) => libm::exp(u.eval_f64(env)?),
            };
            term *= libm::pow(v, *e as f64);
        }
        acc += term;
    }
    Some(acc)
}

fn atom_to_tree(a: &Atom) -> ExprTree {
    use alloc::boxed::Box;
    match a {
        Atom::Var(v) => ExprTree::Var(String::from(&**v)),
        Atom::Sin(u) => ExprTree::Call(Func::Sin, Box::new(u.to_tree())),
        Atom::Cos(u) => ExprTree::Call(Func::Cos, Box::new(u.to_tree())),
        Atom::Exp(u) => ExprTree::Call(Func::Exp, Box::new(u.to_tree())),
    }
}

fn poly_to_tree(p: &Poly) -> ExprTree {
    use alloc::boxed::Box;
    if p.is_zero() {
        return ExprTree::Num(Rational::zero());
    }
    // Highest monomials first reads more naturally.
    let mut terms = Vec::new();
    for (m, c) in p.terms().rev() {
        let mut factors = Vec::new();
        let negative = c.is_negative();
        let mag = c.abs();
        if !mag.is_one() || m.is_one() {
            factors.push(ExprTree::Num(mag));
        }
        for (a, e) in m.factors() {
            let base = atom_to_tree(a);
            if *e == 1 {
                factors.push(base);
            } else {
                factors.push(ExprTree::Pow(Box::new(base), *e as i64));
            }
        }
        let t = if factors.len() == 1 {
            factors.pop().unwrap_or(ExprTree::Num(Rational::one()))
        } else {
            ExprTree::Mul(factors)
        };
        terms.push(if negative { ExprTree::Neg(Box::new(t)) } else { t });
    }
    if terms.len() == 1 {
        terms.pop().unwrap_or(ExprTree::Num(Rational::zero()))
    } else {
        ExprTree::Add(terms)
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_tree(), f)
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::from_int(n)
    }
}

impl From<Rational> for ScalarExpr {
    fn from(c: Rational) -> Self {
        ScalarExpr::from_rational(c)
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ScalarExpr::from_poly(self.num.add(&rhs.num));
        }
        let r = if self.den == rhs.den {
            ScalarExpr::from_parts(self.num.add(&rhs.num), self.den.clone())
        } else {
            ScalarExpr::from_parts(
                self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
                self.den.mul(&rhs.den),
            )
        };
        r.expect("product of nonzero denominators is nonzero")
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + &(-rhs)
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || rhs.is_zero() {
            return ScalarExpr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ScalarExpr::from_poly(self.num.mul(&rhs.num));
        }
        if let Some(c) = self.as_rational() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_rational() {
            return self.scale(&c);
        }
        ScalarExpr::from_parts(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
            .expect("product of nonzero denominators is nonzero")
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: ScalarExpr) -> ScalarExpr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: &ScalarExpr) -> ScalarExpr {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Normalizes a syntax tree; idempotent on the canonical tree it returns.
pub fn normalize(e: &ExprTree) -> Result<ScalarExpr, ScalarError> {
    e.normalize()
}

/// Sound zero test: exact on rational functions, syntactic elsewhere.
pub fn is_zero(e: &ScalarExpr) -> bool {
    e.is_zero()
}

#[cfg(test)]
mod tests;
