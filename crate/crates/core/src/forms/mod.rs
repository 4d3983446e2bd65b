//! Bigraded exterior calculus on coordinate superdomains.
//!
//! A term `f dx^{k1}∧…∧dx^{kr}` keeps its coefficient on the left and its
//! differentials sorted by chart index. Moving dx past dy costs
//! (−1)^{1 + |x||y|}, moving a function g past dx costs (−1)^{|g||x|}, so
//! dq∧dq = 0 while dθ∧dθ survives and is stored as a repeated index.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::charts::{canonical_projection, role_index, sibling, ChartKind, SuperMorphism};
use crate::error::{Error, Result};
use crate::fields::{push_along, FieldAlongMorphism, SuperVectorField};
use crate::superalgebra::{Chart, GradedMatrix, Parity, Role, SuperFunction};

/// Sorted multiset of coordinate indices.
pub type DiffKey = Vec<usize>;

fn key_parity(cs: &Chart, key: &[usize]) -> Parity {
    key.iter().fold(Parity::Even, |p, &i| p + cs.parity(i))
}

/// Sorts a sequence of differentials, returning the sign, or None when an
/// even differential repeats.
fn sort_key(cs: &Chart, mut seq: Vec<usize>) -> Option<(i64, DiffKey)> {
    let mut sign = 1;
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j - 1] > seq[j] {
            if !(cs.parity(seq[j - 1]).is_odd() && cs.parity(seq[j]).is_odd()) {
                sign = -sign;
            }
            seq.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in seq.windows(2) {
        if w[0] == w[1] && !cs.parity(w[0]).is_odd() {
            return None;
        }
    }
    Some((sign, seq))
}

fn parity_parts(f: &SuperFunction) -> [(Parity, SuperFunction); 2] {
    [(Parity::Even, f.even_part()), (Parity::Odd, f.odd_part())]
}

/// Terms over a differential chart `dcs` with coefficients over `ccs`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Terms {
    dcs: Chart,
    ccs: Chart,
    map: BTreeMap<DiffKey, SuperFunction>,
}

impl Terms {
    fn zero(dcs: &Chart, ccs: &Chart) -> Self {
        Terms {
            dcs: dcs.clone(),
            ccs: ccs.clone(),
            map: BTreeMap::new(),
        }
    }

    fn push(&mut self, key: DiffKey, f: SuperFunction) {
        if f.is_zero() {
            return;
        }
        match self.map.get_mut(&key) {
            Some(g) => {
                let s = &*g + &f;
                if s.is_zero() {
                    self.map.remove(&key);
                } else {
                    *g = s;
                }
            }
            None => {
                self.map.insert(key, f);
            }
        }
    }

    /// Pushes `sign · f dx_seq` after sorting `seq`.
    fn push_seq(&mut self, seq: Vec<usize>, sign: i64, f: SuperFunction) {
        if let Some((s, key)) = sort_key(&self.dcs, seq) {
            self.push(key, f.scale_int(s * sign));
        }
    }

    fn add(&self, other: &Terms) -> Result<Terms> {
        self.dcs.ensure_same(&other.dcs)?;
        self.ccs.ensure_same(&other.ccs)?;
        let mut out = self.clone();
        for (k, f) in &other.map {
            out.push(k.clone(), f.clone());
        }
        Ok(out)
    }

    fn map_coefficients(&self, g: impl Fn(&SuperFunction) -> SuperFunction) -> Terms {
        let mut out = Terms::zero(&self.dcs, &self.ccs);
        for (k, f) in &self.map {
            out.push(k.clone(), g(f));
        }
        out
    }

    fn wedge(&self, other: &Terms) -> Result<Terms> {
        self.dcs.ensure_same(&other.dcs)?;
        self.ccs.ensure_same(&other.ccs)?;
        let mut out = Terms::zero(&self.dcs, &self.ccs);
        for (k, f) in &self.map {
            let pk = key_parity(&self.dcs, k);
            for (l, g) in &other.map {
                for (pg, gp) in parity_parts(g) {
                    if gp.is_zero() {
                        continue;
                    }
                    let mut seq = k.clone();
                    seq.extend_from_slice(l);
                    out.push_seq(seq, pk.koszul(pg), f * &gp);
                }
            }
        }
        Ok(out)
    }

    /// ι_{∂a} in the left calculus: an antiderivation with ι_{∂a}(dx^b) = δ.
    fn contract_basis(&self, a: usize) -> Terms {
        let pa = self.dcs.parity(a);
        let mut out = Terms::zero(&self.dcs, &self.ccs);
        for (k, f) in &self.map {
            if !k.contains(&a) {
                continue;
            }
            for (pf, fp) in parity_parts(f) {
                if fp.is_zero() {
                    continue;
                }
                let mut before = Parity::Even;
                for (j, &kj) in k.iter().enumerate() {
                    if kj == a {
                        let mut sign = pa.koszul(pf) * pa.koszul(before);
                        if j % 2 == 1 {
                            sign = -sign;
                        }
                        let mut rest = k.clone();
                        rest.remove(j);
                        out.push(rest, fp.scale_int(sign));
                    }
                    before = before + self.dcs.parity(kj);
                }
            }
        }
        out
    }

    /// ι_Z = Σ Z^a ι_{∂a}, components over the coefficient chart.
    fn contract(&self, comps: &[SuperFunction]) -> Terms {
        let mut out = Terms::zero(&self.dcs, &self.ccs);
        for (a, c) in comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, f) in self.contract_basis(a).map {
                out.push(k, c * &f);
            }
        }
        out
    }

    fn degree(&self) -> Option<usize> {
        let mut it = self.map.keys().map(|k| k.len());
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    fn parity(&self) -> Option<Parity> {
        let mut found = None;
        for (k, f) in &self.map {
            let p = f.parity()? + key_parity(&self.dcs, k);
            match found {
                None => found = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    fn homogeneous_part(&self, p: Parity) -> Terms {
        let mut out = Terms::zero(&self.dcs, &self.ccs);
        for (k, f) in &self.map {
            out.push(k.clone(), f.homogeneous_part(p + key_parity(&self.dcs, k)));
        }
        out
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, hat: bool) -> fmt::Result {
        if self.map.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&DiffKey> = self.map.keys().collect();
        keys.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        for (n, k) in keys.into_iter().enumerate() {
            let mut c = self.map[k].clone();
            if n > 0 {
                let text = alloc::format!("{c}");
                if c.term_count() == 1 && text.starts_with('-') {
                    f.write_str(" - ")?;
                    c = -&c;
                } else {
                    f.write_str(" + ")?;
                }
            }
            let diffs: Vec<String> = k
                .iter()
                .map(|&i| {
                    if hat {
                        alloc::format!("d^{}", self.dcs.name(i))
                    } else {
                        alloc::format!("d{}", self.dcs.name(i))
                    }
                })
                .collect();
            let diffs = diffs.join("∧");
            if k.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&diffs)?;
            } else if c.term_count() == 1 {
                write!(f, "{c} {diffs}")?;
            } else {
                write!(f, "({c}) {diffs}")?;
            }
        }
        Ok(())
    }
}

/// Differential form on a chart, possibly of mixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedForm {
    t: Terms,
}

impl GradedForm {
    pub fn zero(cs: &Chart) -> Self {
        GradedForm { t: Terms::zero(cs, cs) }
    }

    /// The 0-form f.
    pub fn function(f: &SuperFunction) -> Self {
        let mut t = Terms::zero(f.chart(), f.chart());
        t.push(Vec::new(), f.clone());
        GradedForm { t }
    }

    /// dx^i
    pub fn differential(cs: &Chart, i: usize) -> Self {
        let mut t = Terms::zero(cs, cs);
        t.push(alloc::vec![i], SuperFunction::one(cs));
        GradedForm { t }
    }

    pub fn differential_of(cs: &Chart, name: &str) -> Result<Self> {
        Ok(GradedForm::differential(cs, cs.lookup(name)?))
    }

    /// f dx_K from an unsorted sequence of differentials.
    pub fn monomial(f: &SuperFunction, seq: &[usize]) -> Self {
        let mut t = Terms::zero(f.chart(), f.chart());
        t.push_seq(seq.to_vec(), 1, f.clone());
        GradedForm { t }
    }

    /// Σ c_a dx^a with coefficients on the left.
    pub fn one_form(cs: &Chart, coeffs: &[SuperFunction]) -> Result<Self> {
        if coeffs.len() != cs.len() {
            return Err(Error::DimensionMismatch {
                expected: cs.len(),
                found: coeffs.len(),
            });
        }
        let mut t = Terms::zero(cs, cs);
        for (a, c) in coeffs.iter().enumerate() {
            cs.ensure_same(c.chart())?;
            t.push(alloc::vec![a], c.clone());
        }
        Ok(GradedForm { t })
    }

    pub fn chart(&self) -> &Chart {
        &self.t.dcs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffKey, &SuperFunction)> {
        self.t.map.iter()
    }

    pub fn coefficient(&self, key: &[usize]) -> SuperFunction {
        self.t
            .map
            .get(key)
            .cloned()
            .unwrap_or_else(|| SuperFunction::zero(&self.t.ccs))
    }

    pub fn is_zero(&self) -> bool {
        self.t.map.is_empty()
    }

    /// Form degree when homogeneous; the zero form has degree 0.
    pub fn degree(&self) -> Option<usize> {
        self.t.degree()
    }

    /// Grassmann parity (coefficient parity plus differential parities).
    pub fn parity(&self) -> Option<Parity> {
        self.t.parity()
    }

    pub fn homogeneous_part(&self, p: Parity) -> GradedForm {
        GradedForm {
            t: self.t.homogeneous_part(p),
        }
    }

    pub fn degree_part(&self, k: usize) -> GradedForm {
        let mut t = Terms::zero(&self.t.dcs, &self.t.ccs);
        for (key, f) in &self.t.map {
            if key.len() == k {
                t.push(key.clone(), f.clone());
            }
        }
        GradedForm { t }
    }

    pub fn checked_add(&self, other: &GradedForm) -> Result<GradedForm> {
        Ok(GradedForm {
            t: self.t.add(&other.t)?,
        })
    }

    pub fn checked_sub(&self, other: &GradedForm) -> Result<GradedForm> {
        self.checked_add(&other.scale_int(-1))
    }

    pub fn scale_int(&self, k: i64) -> GradedForm {
        GradedForm {
            t: self.t.map_coefficients(|f| f.scale_int(k)),
        }
    }

    /// f·ω
    pub fn scale_left(&self, f: &SuperFunction) -> Result<GradedForm> {
        self.t.ccs.ensure_same(f.chart())?;
        Ok(GradedForm {
            t: self.t.map_coefficients(|c| f * c),
        })
    }

    pub fn wedge(&self, other: &GradedForm) -> Result<GradedForm> {
        Ok(GradedForm {
            t: self.t.wedge(&other.t)?,
        })
    }

    /// d, a derivation of bidegree (1, 0) with df = Σ dx^a ∂_a f.
    pub fn exterior_derivative(&self) -> GradedForm {
        let cs = &self.t.dcs;
        let mut out = Terms::zero(cs, cs);
        for (k, f) in &self.t.map {
            for a in 0..cs.len() {
                let d = f.derivative(a);
                if d.is_zero() {
                    continue;
                }
                let pa = cs.parity(a);
                for (pd, dp) in parity_parts(&d) {
                    if dp.is_zero() {
                        continue;
                    }
                    let mut seq = alloc::vec![a];
                    seq.extend_from_slice(k);
                    out.push_seq(seq, pa.koszul(pd), dp);
                }
            }
        }
        GradedForm { t: out }
    }

    /// Interior product in the left calculus, ι_X = Σ X^a ι_{∂a} with
    /// ι_{∂a}(dx^b) = δ_ab; ι_X(df) = X(f).
    pub fn contract(&self, x: &SuperVectorField) -> Result<GradedForm> {
        self.t.dcs.ensure_same(x.chart())?;
        Ok(GradedForm {
            t: self.t.contract(x.components()),
        })
    }

    /// N_ab = ι_{∂b} ι_{∂a} ω on the degree-2 part.
    pub fn form_matrix(&self) -> GradedMatrix {
        let cs = self.t.dcs.clone();
        let ps: Vec<Parity> = cs.coords().iter().map(|c| c.parity).collect();
        let two = self.degree_part(2).t;
        let mut m = GradedMatrix::zeros(&cs, ps.clone(), ps);
        for a in 0..cs.len() {
            let ia = two.contract_basis(a);
            if ia.map.is_empty() {
                continue;
            }
            for b in 0..cs.len() {
                let iba = ia.contract_basis(b);
                if let Some(f) = iba.map.get(&Vec::new()) {
                    m.set(a, b, f.clone());
                }
            }
        }
        m
    }
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.t.write(f, false)
    }
}

/// Interior product with the pairing dq(∂_q) = 1, dθ(∂_θ) = −1:
/// i_X ω = (−1)^{|X||ω|} ι_X ω on homogeneous parts.
pub fn interior_product(x: &SuperVectorField, w: &GradedForm) -> Result<GradedForm> {
    let mut out = GradedForm::zero(w.chart());
    for px in [Parity::Even, Parity::Odd] {
        let xp = x.homogeneous_part(px);
        if xp.is_zero() {
            continue;
        }
        for pw in [Parity::Even, Parity::Odd] {
            let wp = w.homogeneous_part(pw);
            if wp.is_zero() {
                continue;
            }
            let c = wp.contract(&xp)?.scale_int(px.koszul(pw));
            out = out.checked_add(&c)?;
        }
    }
    Ok(out)
}

/// ω(X_1, …, X_k) = i_{X_k} ⋯ i_{X_1} ω.
pub fn evaluate(w: &GradedForm, xs: &[SuperVectorField]) -> Result<GradedForm> {
    let mut cur = w.clone();
    for x in xs {
        cur = interior_product(x, &cur)?;
    }
    Ok(cur)
}

/// Form along φ: N → M, with differentials d q̂, d θ̂ of target coordinates
/// and coefficients over the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormAlongMorphism {
    phi: SuperMorphism,
    t: Terms,
}

impl FormAlongMorphism {
    pub fn zero(phi: &SuperMorphism) -> Self {
        FormAlongMorphism {
            phi: phi.clone(),
            t: Terms::zero(phi.target(), phi.source()),
        }
    }

    /// Σ c_a d x̂^a, coefficients over the source.
    pub fn one_form(phi: &SuperMorphism, coeffs: &[SuperFunction]) -> Result<Self> {
        if coeffs.len() != phi.target().len() {
            return Err(Error::DimensionMismatch {
                expected: phi.target().len(),
                found: coeffs.len(),
            });
        }
        let mut t = Terms::zero(phi.target(), phi.source());
        for (a, c) in coeffs.iter().enumerate() {
            phi.source().ensure_same(c.chart())?;
            t.push(alloc::vec![a], c.clone());
        }
        Ok(FormAlongMorphism { phi: phi.clone(), t })
    }

    pub fn morphism(&self) -> &SuperMorphism {
        &self.phi
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffKey, &SuperFunction)> {
        self.t.map.iter()
    }

    pub fn coefficient(&self, key: &[usize]) -> SuperFunction {
        self.t
            .map
            .get(key)
            .cloned()
            .unwrap_or_else(|| SuperFunction::zero(&self.t.ccs))
    }

    pub fn is_zero(&self) -> bool {
        self.t.map.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.t.degree()
    }

    pub fn parity(&self) -> Option<Parity> {
        self.t.parity()
    }

    pub fn checked_add(&self, other: &FormAlongMorphism) -> Result<FormAlongMorphism> {
        if self.phi != other.phi {
            return Err(Error::ChartMismatch {
                expected: alloc::format!("form along {}", self.phi),
                found: alloc::format!("form along {}", other.phi),
            });
        }
        Ok(FormAlongMorphism {
            phi: self.phi.clone(),
            t: self.t.add(&other.t)?,
        })
    }

    /// ι_Z in the left calculus for a field along the same morphism.
    pub fn contract(&self, z: &FieldAlongMorphism) -> Result<FormAlongMorphism> {
        if *z.morphism() != self.phi {
            return Err(Error::ChartMismatch {
                expected: alloc::format!("field along {}", self.phi),
                found: alloc::format!("field along {}", z.morphism()),
            });
        }
        Ok(FormAlongMorphism {
            phi: self.phi.clone(),
            t: self.t.contract(z.components()),
        })
    }
}

impl fmt::Display for FormAlongMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.t.write(f, true)
    }
}

/// ω̂: the coefficients of ω pulled back by φ*, differentials kept on the
/// target.
pub fn restrict_form(w: &GradedForm, phi: &SuperMorphism) -> Result<FormAlongMorphism> {
    phi.target().ensure_same(w.chart())?;
    let keys: Vec<&DiffKey> = w.t.map.keys().collect();
    let coeffs: Vec<SuperFunction> = w.t.map.values().cloned().collect();
    let pulled = phi.pullback_all(&coeffs)?;
    let mut t = Terms::zero(phi.target(), phi.source());
    for (k, f) in keys.into_iter().zip(pulled) {
        t.push(k.clone(), f);
    }
    Ok(FormAlongMorphism { phi: phi.clone(), t })
}

/// φ^♯: replaces each d x̂^k by d(φ*(x^k)).
pub fn sharp(w: &FormAlongMorphism) -> Result<GradedForm> {
    let src = w.phi.source();
    let dphi: Vec<GradedForm> = w
        .phi
        .assignments()
        .iter()
        .map(|a| GradedForm::function(a).exterior_derivative())
        .collect();
    let mut out = GradedForm::zero(src);
    for (k, f) in &w.t.map {
        let mut acc = GradedForm::function(f);
        for &i in k {
            acc = acc.wedge(&dphi[i])?;
        }
        out = out.checked_add(&acc)?;
    }
    Ok(out)
}

/// Φ*μ = φ^♯(μ̂).
pub fn pullback(phi: &SuperMorphism, w: &GradedForm) -> Result<GradedForm> {
    sharp(&restrict_form(w, phi)?)
}

/// Left-calculus pairing of a form on N with Tφ(Y), used to check
/// ι_Y(Φ*μ) = ι_{Tφ(Y)}(μ̂).
pub fn contract_pushed(w: &FormAlongMorphism, y: &SuperVectorField) -> Result<FormAlongMorphism> {
    w.contract(&push_along(y, &w.phi)?)
}

/// The form along φ carried by a φ-semibasic form on N, when φ sends each
/// target coordinate to the same-named source coordinate.
pub fn semibasic_along(w: &GradedForm, phi: &SuperMorphism) -> Result<FormAlongMorphism> {
    let (src, tgt) = (phi.source(), phi.target());
    src.ensure_same(w.chart())?;
    let mut image = Vec::with_capacity(tgt.len());
    for a in 0..tgt.len() {
        match src.index_of(tgt.name(a)) {
            Some(j) if *phi.assignment(a) == SuperFunction::coordinate(src, j) => image.push(j),
            _ => {
                return Err(Error::ChartMismatch {
                    expected: String::from("a coordinate projection"),
                    found: alloc::format!("{phi}"),
                })
            }
        }
    }
    let mut t = Terms::zero(tgt, src);
    for (k, f) in &w.t.map {
        let mut key = Vec::with_capacity(k.len());
        for &j in k {
            match image.iter().position(|&i| i == j) {
                Some(a) => key.push(a),
                None => return Err(Error::NotSemibasic(String::from(src.name(j)))),
            }
        }
        t.push_seq(key, 1, f.clone());
    }
    Ok(FormAlongMorphism { phi: phi.clone(), t })
}

fn is_cotangent_kind(cs: &Chart) -> Result<()> {
    match cs.kind() {
        ChartKind::CotangentSuper | ChartKind::Cotangent | ChartKind::OddSector => Ok(()),
        k => Err(Error::ChartMismatch {
            expected: String::from("cotangent, cotangent-super or odd-sector chart"),
            found: String::from(k.name()),
        }),
    }
}

/// Θ₀ = Σ (p + πp) dq + Σ (η + πη) dθ, keeping the momenta the chart has.
pub fn liouville_form(total: &Chart) -> Result<GradedForm> {
    is_cotangent_kind(total)?;
    let mut coeffs = alloc::vec![SuperFunction::zero(total); total.len()];
    for (a, c) in total.coords().iter().enumerate() {
        let (even, odd) = match c.role {
            Role::BaseEven => (Role::Momentum, Role::PiMomentum),
            Role::BaseOdd => (Role::OddMomentum, Role::PiOddMomentum),
            _ => continue,
        };
        for r in [even, odd] {
            if let Some(i) = total.find_role(r, c.index) {
                coeffs[a] = &coeffs[a] + &SuperFunction::coordinate(total, i);
            }
        }
    }
    GradedForm::one_form(total, &coeffs)
}

/// Ω₀ = −dΘ₀.
pub fn canonical_two_form(total: &Chart) -> Result<GradedForm> {
    Ok(liouville_form(total)?.exterior_derivative().scale_int(-1))
}

/// Section Σ_ω of ST*M attached to a 1-form ω = Σ w_i dq^i + Σ ω_α dθ^α on
/// the base: p ↦ w_0, πp ↦ w_1, η ↦ ω_1, πη ↦ ω_0.
pub fn one_form_section(w: &GradedForm) -> Result<SuperMorphism> {
    let base = w.chart();
    if base.kind() != ChartKind::Base {
        return Err(Error::ChartMismatch {
            expected: String::from("a 1-form on a base chart"),
            found: String::from(base.kind().name()),
        });
    }
    if let Some((k, _)) = w.terms().find(|(k, _)| k.len() != 1) {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: k.len(),
        });
    }
    let st = sibling(base, ChartKind::CotangentSuper)?;
    let coeff = |r: Role, k: usize| w.coefficient(&[role_index(base, r, k)]);
    let mut assign = Vec::with_capacity(st.len());
    for c in st.coords() {
        let f = match c.role {
            Role::BaseEven | Role::BaseOdd => SuperFunction::var(base, &c.name)?,
            Role::Momentum => coeff(Role::BaseEven, c.index).even_part(),
            Role::PiMomentum => coeff(Role::BaseEven, c.index).odd_part(),
            Role::OddMomentum => coeff(Role::BaseOdd, c.index).odd_part(),
            Role::PiOddMomentum => coeff(Role::BaseOdd, c.index).even_part(),
            _ => unreachable!("cotangent-super charts carry no velocity roles"),
        };
        assign.push(f);
    }
    SuperMorphism::new(base, &st, assign)
}

/// Fields on `total` with components only on fiber coordinates span the
/// vertical directions of the bundle projection.
pub fn vertical_basis(total: &Chart) -> Result<Vec<SuperVectorField>> {
    let pi = canonical_projection(total)?;
    let base = pi.target();
    Ok((0..total.len())
        .filter(|&i| base.index_of(total.name(i)).is_none())
        .map(|i| SuperVectorField::partial(total, i))
        .collect())
}
