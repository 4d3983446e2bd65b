//! Sparse multivariate polynomials over the rationals, in opaque atoms.
//!
//! Atoms are either named variables or transcendental kernels such as
//! `sin(u)`; the polynomial layer does not look inside them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{Rational, ScalarExpr};

/// A polynomial indeterminate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Var(Arc<str>),
    Sin(Arc<ScalarExpr>),
    Cos(Arc<ScalarExpr>),
    Exp(Arc<ScalarExpr>),
}

impl Atom {
    pub(crate) fn depends_on(&self, name: &str) -> bool {
        match self {
            Atom::Var(v) => &**v == name,
            Atom::Sin(u) | Atom::Cos(u) | Atom::Exp(u) => u.depends_on(name),
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Atom::Var(v) => {
                out.insert(v.clone());
            }
            Atom::Sin(u) | Atom::Cos(u) | Atom::Exp(u) => u.collect_vars(out),
        }
    }
}

/// Product of atoms with positive exponents, sorted by atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub(crate) Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(alloc::vec![(a, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                core::cmp::Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    fn degree_in(&self, a: &Atom) -> u32 {
        self.0
            .iter()
            .find(|(b, _)| b == a)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn without(&self, a: &Atom) -> Monomial {
        Monomial(self.0.iter().filter(|(b, _)| b != a).cloned().collect())
    }

    fn with_power(&self, a: &Atom, e: u32) -> Monomial {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Monomial(alloc::vec![(a.clone(), e)]))
    }
}

/// Sparse polynomial with rational coefficients; no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn atom(a: Atom) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::atom(a), Rational::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub(crate) fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in &m.0 {
                out.insert(a.clone());
            }
        }
        out
    }

    pub(crate) fn depends_on(&self, name: &str) -> bool {
        self.terms
            .keys()
            .any(|m| m.0.iter().any(|(a, _)| a.depends_on(name)))
    }

    fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_in(a)).max().unwrap_or(0)
    }

    /// Leading coefficient with respect to the (fixed) monomial order.
    pub(crate) fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Coefficients in powers of `a`: entry `k` multiplies `a^k`.
    fn to_univariate(&self, a: &Atom) -> Vec<Poly> {
        let mut out = alloc::vec![Poly::zero(); self.degree_in(a) as usize + 1];
        for (m, c) in &self.terms {
            let k = m.degree_in(a) as usize;
            out[k].add_term(m.without(a), c.clone());
        }
        out
    }

    fn from_univariate(coeffs: &[Poly], a: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                out.add_term(m.with_power(a, k as u32), c.clone());
            }
        }
        out
    }

    /// Exact quotient `self / other`, or `None` when `other` does not divide.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = other.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let x = other.atoms().into_iter().next_back()?;
        let b = other.to_univariate(&x);
        let db = b.len() - 1;
        let lcb = &b[db];
        let mut r = self.to_univariate(&x);
        if r.len() < b.len() {
            return None;
        }
        let mut q = alloc::vec![Poly::zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let t = r[k].div_exact(lcb)?;
            for (j, bj) in b.iter().enumerate() {
                let prod = t.mul(bj);
                r[k - db + j] = r[k - db + j].sub(&prod);
            }
            q[k - db] = t;
        }
        if r.iter().any(|p| !p.is_zero()) {
            return None;
        }
        Some(Poly::from_univariate(&q, &x))
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Greatest common divisor, normalized to be monic.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.as_constant().is_some() || other.as_constant().is_some() {
            return Poly::one();
        }
        let mut all = self.atoms();
        all.extend(other.atoms());
        let x = match all.into_iter().next_back() {
            Some(x) => x,
            None => return Poly::one(),
        };
        let da = self.degree_in(&x);
        let db = other.degree_in(&x);
        if da == 0 {
            return self.gcd(&other.content_in(&x));
        }
        if db == 0 {
            return other.gcd(&self.content_in(&x));
        }
        let ca = self.content_in(&x);
        let cb = other.content_in(&x);
        let content = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).unwrap_or_else(|| self.clone());
        let mut b = other.div_exact(&cb).unwrap_or_else(|| other.clone());
        if coprime_by_evaluation(&a, &b, &x) {
            return content.monic();
        }
        if a.degree_in(&x) < b.degree_in(&x) {
            core::mem::swap(&mut a, &mut b);
        }
        let prim = loop {
            let r = a.pseudo_rem(&b, &x);
            if r.is_zero() {
                break b;
            }
            if r.degree_in(&x) == 0 {
                break Poly::one();
            }
            a = b;
            b = r.primitive_part(&x);
        };
        content.mul(&prim.primitive_part(&x)).monic()
    }

    fn content_in(&self, x: &Atom) -> Poly {
        let mut g = Poly::zero();
        for c in self.to_univariate(x) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part(&self, x: &Atom) -> Poly {
        let c = self.content_in(x);
        self.div_exact(&c).unwrap_or_else(|| self.clone())
    }

    fn pseudo_rem(&self, b: &Poly, x: &Atom) -> Poly {
        let bu = b.to_univariate(x);
        let db = bu.len() - 1;
        let lcb = bu[db].clone();
        let mut r = self.to_univariate(x);
        while r.len() > db && r.len() > 0 {
            let k = r.len() - 1;
            if r[k].is_zero() {
                r.pop();
                continue;
            }
            let lr = r[k].clone();
            for p in r.iter_mut() {
                *p = p.mul(&lcb);
            }
            for (j, bj) in bu.iter().enumerate() {
                let prod = lr.mul(bj);
                r[k - db + j] = r[k - db + j].sub(&prod);
            }
            r.pop();
        }
        Poly::from_univariate(&r, x)
    }
}

/// Specializes every atom but `x` to small integers and checks that the
/// univariate images are coprime. A `true` answer is exact: if neither
/// leading coefficient vanishes at the point, a common factor of positive
/// degree in `x` would survive the specialization.
fn coprime_by_evaluation(a: &Poly, b: &Poly, x: &Atom) -> bool {
    let mut others = a.atoms();
    others.extend(b.atoms());
    others.remove(x);
    for shift in 0..2i64 {
        let point: BTreeMap<&Atom, Rational> = others
            .iter()
            .enumerate()
            .map(|(i, t)| (t, Rational::from_integer((3 + 2 * i as i64 + 7 * shift).into())))
            .collect();
        let (ua, ub) = (specialize(a, x, &point), specialize(b, x, &point));
        if ua.len() as u32 != a.degree_in(x) + 1 || ub.len() as u32 != b.degree_in(x) + 1 {
            continue;
        }
        return univariate_gcd_degree(ua, ub) == 0;
    }
    false
}

/// Dense coefficients in `x` after substituting `point`, trailing zeros trimmed.
fn specialize(p: &Poly, x: &Atom, point: &BTreeMap<&Atom, Rational>) -> Vec<Rational> {
    let mut out = alloc::vec![Rational::zero(); p.degree_in(x) as usize + 1];
    for (m, c) in &p.terms {
        let mut v = c.clone();
        let mut k = 0;
        for (t, e) in &m.0 {
            if t == x {
                k = *e as usize;
            } else {
                v *= num_traits::pow(point[t].clone(), *e as usize);
            }
        }
        out[k] += v;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> usize {
    if a.len() < b.len() {
        core::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let db = b.len() - 1;
        let lcb = b[db].clone();
        while a.len() > db {
            let k = a.len() - 1;
            let t = &a[k] / &lcb;
            for (j, bj) in b.iter().enumerate() {
                a[k - db + j] -= &t * bj;
            }
            a.pop();
            while a.last().is_some_and(|c| c.is_zero()) {
                a.pop();
            }
        }
        core::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}
