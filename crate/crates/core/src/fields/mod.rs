//! Supervector fields, fields along morphisms, vertical lifts and the
//! vertical endomorphism.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::charts::{canonical_projection, role_index, sibling, ChartKind, SuperMorphism};
use crate::error::{Error, Result};
use crate::scalar::ScalarExpr;
use crate::superalgebra::{Chart, GradedMatrix, Parity, Role, SuperFunction};

/// X = Σ X^a ∂_a, acting with the component to the left of the left
/// derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperVectorField {
    cs: Chart,
    comps: Vec<SuperFunction>,
}

fn field_parity(cs: &Chart, comps: &[SuperFunction]) -> Option<Parity> {
    let mut found: Option<Parity> = None;
    for (a, c) in comps.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let p = c.parity()? + cs.parity(a);
        match found {
            None => found = Some(p),
            Some(q) if q != p => return None,
            _ => {}
        }
    }
    Some(found.unwrap_or(Parity::Even))
}

fn split_part(cs: &Chart, comps: &[SuperFunction], p: Parity) -> Vec<SuperFunction> {
    comps
        .iter()
        .enumerate()
        .map(|(a, c)| c.homogeneous_part(p + cs.parity(a)))
        .collect()
}

fn write_components(f: &mut fmt::Formatter<'_>, cs: &Chart, comps: &[SuperFunction]) -> fmt::Result {
    let mut first = true;
    for (a, c) in comps.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        if c.is_one() {
            write!(f, "∂{}", cs.name(a))?;
        } else if c.term_count() == 1 {
            write!(f, "{} ∂{}", c, cs.name(a))?;
        } else {
            write!(f, "({}) ∂{}", c, cs.name(a))?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl SuperVectorField {
    pub fn new(cs: &Chart, comps: Vec<SuperFunction>) -> Result<Self> {
        if comps.len() != cs.len() {
            return Err(Error::DimensionMismatch {
                expected: cs.len(),
                found: comps.len(),
            });
        }
        for c in &comps {
            cs.ensure_same(c.chart())?;
        }
        Ok(SuperVectorField {
            cs: cs.clone(),
            comps,
        })
    }

    pub fn zero(cs: &Chart) -> Self {
        SuperVectorField {
            cs: cs.clone(),
            comps: alloc::vec![SuperFunction::zero(cs); cs.len()],
        }
    }

    /// ∂_i
    pub fn partial(cs: &Chart, i: usize) -> Self {
        let mut x = SuperVectorField::zero(cs);
        x.comps[i] = SuperFunction::one(cs);
        x
    }

    pub fn from_named(cs: &Chart, named: &[(&str, SuperFunction)]) -> Result<Self> {
        let mut x = SuperVectorField::zero(cs);
        for (n, f) in named {
            cs.ensure_same(f.chart())?;
            let i = cs.lookup(n)?;
            x.comps[i] = &x.comps[i] + f;
        }
        Ok(x)
    }

    pub fn chart(&self) -> &Chart {
        &self.cs
    }

    pub fn component(&self, i: usize) -> &SuperFunction {
        &self.comps[i]
    }

    pub fn components(&self) -> &[SuperFunction] {
        &self.comps
    }

    pub fn component_of(&self, name: &str) -> Result<&SuperFunction> {
        Ok(&self.comps[self.cs.lookup(name)?])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Parity when homogeneous; the zero field counts as even.
    pub fn parity(&self) -> Option<Parity> {
        field_parity(&self.cs, &self.comps)
    }

    pub fn homogeneous_part(&self, p: Parity) -> SuperVectorField {
        SuperVectorField {
            cs: self.cs.clone(),
            comps: split_part(&self.cs, &self.comps, p),
        }
    }

    pub fn apply(&self, f: &SuperFunction) -> Result<SuperFunction> {
        self.cs.ensure_same(f.chart())?;
        let mut acc = SuperFunction::zero(&self.cs);
        for (a, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(a);
            if d.is_zero() {
                continue;
            }
            acc = &acc + &(c * &d);
        }
        Ok(acc)
    }

    pub fn checked_add(&self, other: &SuperVectorField) -> Result<SuperVectorField> {
        self.cs.ensure_same(&other.cs)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SuperVectorField {
            cs: self.cs.clone(),
            comps,
        })
    }

    pub fn checked_sub(&self, other: &SuperVectorField) -> Result<SuperVectorField> {
        self.checked_add(&other.scale_int(-1))
    }

    /// f·X
    pub fn scale_left(&self, f: &SuperFunction) -> Result<SuperVectorField> {
        self.cs.ensure_same(f.chart())?;
        Ok(SuperVectorField {
            cs: self.cs.clone(),
            comps: self.comps.iter().map(|c| f * c).collect(),
        })
    }

    pub fn scale_int(&self, k: i64) -> SuperVectorField {
        SuperVectorField {
            cs: self.cs.clone(),
            comps: self.comps.iter().map(|c| c.scale_int(k)).collect(),
        }
    }

    /// Supercommutator [X, Y] = XY − (−1)^{|X||Y|} YX of homogeneous fields.
    pub fn bracket(&self, other: &SuperVectorField) -> Result<SuperVectorField> {
        let (px, py) = match (self.parity(), other.parity()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NotHomogeneous),
        };
        let sign = px.koszul(py);
        let mut comps = Vec::with_capacity(self.cs.len());
        for a in 0..self.cs.len() {
            let xy = self.apply(&other.comps[a])?;
            let yx = other.apply(&self.comps[a])?;
            comps.push(&xy - &yx.scale_int(sign));
        }
        SuperVectorField::new(&self.cs, comps)
    }
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_components(f, &self.cs, &self.comps)
    }
}

/// Field along φ: N → M; acts on functions over M by Σ X^a φ*(∂_a f).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldAlongMorphism {
    phi: SuperMorphism,
    comps: Vec<SuperFunction>,
}

impl FieldAlongMorphism {
    /// `comps[a]` is the component on the `a`-th target coordinate, written
    /// over the source chart.
    pub fn new(phi: &SuperMorphism, comps: Vec<SuperFunction>) -> Result<Self> {
        if comps.len() != phi.target().len() {
            return Err(Error::DimensionMismatch {
                expected: phi.target().len(),
                found: comps.len(),
            });
        }
        for c in &comps {
            phi.source().ensure_same(c.chart())?;
        }
        Ok(FieldAlongMorphism {
            phi: phi.clone(),
            comps,
        })
    }

    pub fn morphism(&self) -> &SuperMorphism {
        &self.phi
    }

    pub fn component(&self, a: usize) -> &SuperFunction {
        &self.comps[a]
    }

    pub fn components(&self) -> &[SuperFunction] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn parity(&self) -> Option<Parity> {
        field_parity(self.phi.target(), &self.comps)
    }

    pub fn homogeneous_part(&self, p: Parity) -> FieldAlongMorphism {
        FieldAlongMorphism {
            phi: self.phi.clone(),
            comps: split_part(self.phi.target(), &self.comps, p),
        }
    }

    pub fn apply(&self, f: &SuperFunction) -> Result<SuperFunction> {
        self.phi.target().ensure_same(f.chart())?;
        let src = self.phi.source();
        let mut acc = SuperFunction::zero(src);
        for (a, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(a);
            if d.is_zero() {
                continue;
            }
            acc = &acc + &(c * &self.phi.pullback(&d)?);
        }
        Ok(acc)
    }
}

impl fmt::Display for FieldAlongMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_components(f, self.phi.target(), &self.comps)
    }
}

/// X̂ = φ* ∘ X.
pub fn hat_restrict(x: &SuperVectorField, phi: &SuperMorphism) -> Result<FieldAlongMorphism> {
    phi.target().ensure_same(&x.cs)?;
    let comps = phi.pullback_all(&x.comps)?;
    FieldAlongMorphism::new(phi, comps)
}

/// Tφ(Y) = Y ∘ φ*.
pub fn push_along(y: &SuperVectorField, phi: &SuperMorphism) -> Result<FieldAlongMorphism> {
    phi.source().ensure_same(&y.cs)?;
    let coords: Vec<SuperFunction> = (0..phi.target().len())
        .map(|a| phi.assignment(a).clone())
        .collect();
    let comps = coords.iter().map(|c| y.apply(c)).collect::<Result<Vec<_>>>()?;
    FieldAlongMorphism::new(phi, comps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projectability {
    Projectable(SuperVectorField),
    NotProjectable { reason: String },
    /// φ is not a coordinate projection; image membership is not decided.
    Undecided,
}

/// Whether Tφ(Y) = X̂ for some field X on the target. Decided only when φ
/// sends every target coordinate to the source coordinate of the same name.
pub fn projectability(along: &FieldAlongMorphism) -> Result<Projectability> {
    let phi = &along.phi;
    let (src, tgt) = (phi.source(), phi.target());
    let mut image = Vec::new();
    for a in 0..tgt.len() {
        match src.index_of(tgt.name(a)) {
            Some(j) if *phi.assignment(a) == SuperFunction::coordinate(src, j) => image.push(j),
            _ => return Ok(Projectability::Undecided),
        }
    }
    let mut comps = Vec::with_capacity(tgt.len());
    for (a, c) in along.comps.iter().enumerate() {
        for j in 0..src.len() {
            if !image.contains(&j) && c.depends_on(j) {
                return Ok(Projectability::NotProjectable {
                    reason: alloc::format!(
                        "component on {} depends on {}",
                        tgt.name(a),
                        src.name(j)
                    ),
                });
            }
        }
        comps.push(c.reexpress(tgt)?);
    }
    Ok(Projectability::Projectable(SuperVectorField::new(tgt, comps)?))
}

fn is_tangent_kind(cs: &Chart) -> Result<bool> {
    match cs.kind() {
        ChartKind::TangentSuper => Ok(true),
        ChartKind::Tangent => Ok(false),
        k => Err(Error::ChartMismatch {
            expected: String::from("tangent or tangent-super chart"),
            found: String::from(k.name()),
        }),
    }
}

/// T = Σ (v + πv) ∂_q̂ + Σ (ζ + πζ) ∂_θ̂ along τ (the π terms only on the
/// super chart).
pub fn total_time_derivative(total: &Chart) -> Result<FieldAlongMorphism> {
    let sup = is_tangent_kind(total)?;
    let tau = canonical_projection(total)?;
    let base = tau.target().clone();
    let coord = |r: Role, k: usize| SuperFunction::coordinate(total, role_index(total, r, k));
    let mut comps = Vec::with_capacity(base.len());
    for a in 0..base.len() {
        let c = base.coord(a);
        let (fib, pi) = match c.role {
            Role::BaseEven => (Role::Velocity, Role::PiVelocity),
            _ => (Role::OddVelocity, Role::PiOddVelocity),
        };
        let mut f = coord(fib, c.index);
        if sup {
            f = &f + &coord(pi, c.index);
        }
        comps.push(f);
    }
    FieldAlongMorphism::new(&tau, comps)
}

/// f^V = Σ v^i ∂F/∂q^i + Σ ζ^α ∂F/∂θ^α with F = τ*(f), fiber coordinates on
/// the left (v + πv, ζ + πζ on the super chart). Equal to T(f).
pub fn vertical_lift_function(f: &SuperFunction, total: &Chart) -> Result<SuperFunction> {
    total_time_derivative(total)?.apply(f)
}

/// Vertical lift of a field along τ: X^i ∂_{v^i} + χ^α ∂_{ζ^α}, and on the
/// super chart X^i (∂_{v^i} + ∂_{πv^i}) + χ^α (∂_{ζ^α} + ∂_{πζ^α}).
pub fn vertical_lift_field(x: &FieldAlongMorphism) -> Result<SuperVectorField> {
    let total = x.phi.source().clone();
    let sup = is_tangent_kind(&total)?;
    let tau = canonical_projection(&total)?;
    if tau != x.phi {
        return Err(Error::ChartMismatch {
            expected: String::from("field along the canonical projection"),
            found: alloc::format!("field along a morphism into {}", x.phi.target()),
        });
    }
    let base = tau.target();
    let mut out = SuperVectorField::zero(&total);
    for a in 0..base.len() {
        let c = base.coord(a);
        let (fib, pi) = match c.role {
            Role::BaseEven => (Role::Velocity, Role::PiVelocity),
            _ => (Role::OddVelocity, Role::PiOddVelocity),
        };
        out.comps[role_index(&total, fib, c.index)] = x.comps[a].clone();
        if sup {
            out.comps[role_index(&total, pi, c.index)] = x.comps[a].clone();
        }
    }
    Ok(out)
}

/// Vertical lift of a field on the base: the lift of X̂ along τ.
pub fn vertical_lift_base_field(x: &SuperVectorField, total: &Chart) -> Result<SuperVectorField> {
    let tau = canonical_projection(total)?;
    vertical_lift_field(&hat_restrict(x, &tau)?)
}

/// Δ = T^V.
pub fn liouville_field(total: &Chart) -> Result<SuperVectorField> {
    vertical_lift_field(&total_time_derivative(total)?)
}

/// S(Y) = (Tτ Y)^V on a tangent or tangent-super chart.
#[derive(Clone, Debug)]
pub struct VerticalEndomorphism {
    tau: SuperMorphism,
}

impl VerticalEndomorphism {
    pub fn new(total: &Chart) -> Result<Self> {
        is_tangent_kind(total)?;
        Ok(VerticalEndomorphism {
            tau: canonical_projection(total)?,
        })
    }

    pub fn chart(&self) -> &Chart {
        self.tau.source()
    }

    pub fn apply(&self, y: &SuperVectorField) -> Result<SuperVectorField> {
        vertical_lift_field(&push_along(y, &self.tau)?)
    }

    /// Column b holds the components of S(∂_b).
    pub fn matrix(&self) -> Result<GradedMatrix> {
        let cs = self.chart().clone();
        let ps: Vec<Parity> = cs.coords().iter().map(|c| c.parity).collect();
        let mut m = GradedMatrix::zeros(&cs, ps.clone(), ps);
        for b in 0..cs.len() {
            let s = self.apply(&SuperVectorField::partial(&cs, b))?;
            for a in 0..cs.len() {
                m.set(a, b, s.comps[a].clone());
            }
        }
        Ok(m)
    }
}

/// Section of the tangent superbundle attached to a field along φ: N → M:
/// q ↦ φ*(q), θ ↦ φ*(θ), v ↦ X_0, πv ↦ X_1, ζ ↦ χ_1, πζ ↦ χ_0.
pub fn field_to_section(x: &FieldAlongMorphism) -> Result<SuperMorphism> {
    let base = x.phi.target();
    if base.kind() != ChartKind::Base {
        return Err(Error::ChartMismatch {
            expected: String::from("field along a morphism into a base chart"),
            found: String::from(base.kind().name()),
        });
    }
    let st = sibling(base, ChartKind::TangentSuper)?;
    let src = x.phi.source();
    let mut assign = Vec::with_capacity(st.len());
    for i in 0..st.len() {
        let c = st.coord(i);
        let f = match c.role {
            Role::BaseEven | Role::BaseOdd => x.phi.assignment_of(&c.name)?.clone(),
            Role::Velocity => x.comps[role_index(base, Role::BaseEven, c.index)].even_part(),
            Role::PiVelocity => x.comps[role_index(base, Role::BaseEven, c.index)].odd_part(),
            Role::OddVelocity => x.comps[role_index(base, Role::BaseOdd, c.index)].odd_part(),
            Role::PiOddVelocity => x.comps[role_index(base, Role::BaseOdd, c.index)].even_part(),
            _ => unreachable!("tangent-super charts carry no momentum roles"),
        };
        assign.push(f);
    }
    SuperMorphism::new(src, &st, assign)
}

/// Inverse of [`field_to_section`]: the field along τ∘σ with components
/// σ*(v + πv) and σ*(ζ + πζ).
pub fn section_to_field(sigma: &SuperMorphism) -> Result<FieldAlongMorphism> {
    let st = sigma.target();
    if st.kind() != ChartKind::TangentSuper {
        return Err(Error::ChartMismatch {
            expected: String::from("section into a tangent-super chart"),
            found: String::from(st.kind().name()),
        });
    }
    let tau = canonical_projection(st)?;
    let phi = tau.compose(sigma)?;
    let base = tau.target();
    let mut comps = Vec::with_capacity(base.len());
    for a in 0..base.len() {
        let c = base.coord(a);
        let (fib, pi) = match c.role {
            Role::BaseEven => (Role::Velocity, Role::PiVelocity),
            _ => (Role::OddVelocity, Role::PiOddVelocity),
        };
        comps.push(sigma.assignment(role_index(st, fib, c.index)) + sigma.assignment(role_index(st, pi, c.index)));
    }
    FieldAlongMorphism::new(&phi, comps)
}

/// Rank of the linear conditions Y(f^V) = 0 for f in {q^i, θ^α, q^iq^j,
/// q^iθ^α} on the tangent chart of type (m, n), with every component of Y
/// a general Grassmann polynomial with unknown coefficients. Returns
/// (rank, number of unknowns); equality means Y = 0 is forced.
pub fn lift_determinacy(m: usize, n: usize) -> Result<(usize, usize)> {
    let tm = crate::charts::make_chart(ChartKind::Tangent, m, n);
    let base = sibling(&tm, ChartKind::Base)?;
    let odd = tm.odd_count();
    let mut unknowns: Vec<String> = Vec::new();
    let mut comps = Vec::with_capacity(tm.len());
    for a in 0..tm.len() {
        let mut c = SuperFunction::zero(&tm);
        for mask in 0..(1u64 << odd) {
            let name = alloc::format!("u_{a}_{mask}");
            let mut t = SuperFunction::scalar(&tm, ScalarExpr::var(&name))?;
            for b in (0..odd as u32).filter(|b| mask & (1 << b) != 0) {
                t = &t * &SuperFunction::coordinate(&tm, tm.odd_coord(b));
            }
            c = &c + &t;
            unknowns.push(name);
        }
        comps.push(c);
    }
    let y = SuperVectorField::new(&tm, comps)?;
    let mut family = Vec::new();
    let qs = base.with_role(Role::BaseEven);
    let ths = base.with_role(Role::BaseOdd);
    for &i in qs.iter().chain(&ths) {
        family.push(SuperFunction::coordinate(&base, i));
    }
    for (x, &i) in qs.iter().enumerate() {
        for &j in &qs[x..] {
            family.push(&SuperFunction::coordinate(&base, i) * &SuperFunction::coordinate(&base, j));
        }
        for &a in &ths {
            family.push(&SuperFunction::coordinate(&base, i) * &SuperFunction::coordinate(&base, a));
        }
    }
    let mut rows: Vec<Vec<ScalarExpr>> = Vec::new();
    for f in &family {
        let fv = vertical_lift_function(f, &tm)?;
        let r = y.apply(&fv)?;
        for (_, c) in r.terms() {
            rows.push(unknowns.iter().map(|u| c.derivative(u)).collect());
        }
    }
    let mat = crate::superalgebra::ScalarMatrix::from_rows(rows);
    Ok((mat.rank()?, unknowns.len()))
}

#[cfg(test)]
mod tests;
