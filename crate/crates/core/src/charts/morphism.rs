use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::{sibling, ChartKind};
use crate::error::{Error, Result};
use crate::scalar::{Rational, ScalarExpr};
use crate::superalgebra::{Chart, Role, SuperFunction};

/// Morphism of superdomains `source -> target`, stored as the pullback of
/// every target coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMorphism {
    source: Chart,
    target: Chart,
    assign: Vec<SuperFunction>,
}

impl SuperMorphism {
    /// `assign[i]` is the image of the `i`-th target coordinate.
    pub fn new(source: &Chart, target: &Chart, assign: Vec<SuperFunction>) -> Result<Self> {
        if assign.len() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                found: assign.len(),
            });
        }
        for (i, a) in assign.iter().enumerate() {
            source.ensure_same(a.chart())?;
            if !a.is_homogeneous_of(target.parity(i)) {
                return Err(Error::ParityMismatch {
                    coordinate: String::from(target.name(i)),
                });
            }
        }
        Ok(SuperMorphism {
            source: source.clone(),
            target: target.clone(),
            assign,
        })
    }

    /// Builds from named assignments; unlisted target coordinates map to
    /// the source coordinate of the same name.
    pub fn from_named(
        source: &Chart,
        target: &Chart,
        named: &BTreeMap<String, SuperFunction>,
    ) -> Result<Self> {
        for k in named.keys() {
            target.lookup(k)?;
        }
        let mut assign = Vec::with_capacity(target.len());
        for i in 0..target.len() {
            match named.get(target.name(i)) {
                Some(f) => assign.push(f.clone()),
                None => {
                    let j = source.lookup(target.name(i))?;
                    if source.parity(j) != target.parity(i) {
                        return Err(Error::ParityMismatch {
                            coordinate: String::from(target.name(i)),
                        });
                    }
                    assign.push(SuperFunction::coordinate(source, j));
                }
            }
        }
        SuperMorphism::new(source, target, assign)
    }

    pub fn identity(cs: &Chart) -> Self {
        SuperMorphism {
            source: cs.clone(),
            target: cs.clone(),
            assign: (0..cs.len()).map(|i| SuperFunction::coordinate(cs, i)).collect(),
        }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn assignment(&self, i: usize) -> &SuperFunction {
        &self.assign[i]
    }

    pub fn assignments(&self) -> &[SuperFunction] {
        &self.assign
    }

    pub fn assignment_of(&self, name: &str) -> Result<&SuperFunction> {
        Ok(&self.assign[self.target.lookup(name)?])
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target
            && self
                .assign
                .iter()
                .enumerate()
                .all(|(i, a)| *a == SuperFunction::coordinate(&self.source, i))
    }

    /// Pullback φ* of a superfunction over the target chart.
    pub fn pullback(&self, f: &SuperFunction) -> Result<SuperFunction> {
        self.target.ensure_same(f.chart())?;
        Pullback::new(self).apply(f)
    }

    /// Pullback of many functions sharing the precomputed data.
    pub fn pullback_all(&self, fs: &[SuperFunction]) -> Result<Vec<SuperFunction>> {
        let pb = Pullback::new(self);
        fs.iter()
            .map(|f| {
                self.target.ensure_same(f.chart())?;
                pb.apply(f)
            })
            .collect()
    }

    /// `self ∘ inner`, with pullback `inner* ∘ self*`.
    pub fn compose(&self, inner: &SuperMorphism) -> Result<SuperMorphism> {
        self.source.ensure_same(&inner.target)?;
        let assign = inner.pullback_all(&self.assign)?;
        Ok(SuperMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            assign,
        })
    }
}

struct Pullback<'a> {
    m: &'a SuperMorphism,
    bodies: BTreeMap<String, ScalarExpr>,
    /// Even target coordinates whose image has a soul: (name, soul).
    souls: Vec<(String, SuperFunction)>,
}

impl<'a> Pullback<'a> {
    fn new(m: &'a SuperMorphism) -> Self {
        let mut bodies = BTreeMap::new();
        let mut souls = Vec::new();
        for (i, a) in m.assign.iter().enumerate() {
            if m.target.parity(i).is_odd() {
                continue;
            }
            let name = String::from(m.target.name(i));
            let b = a.body();
            if b != ScalarExpr::var(&name) {
                bodies.insert(name.clone(), b);
            }
            let s = a.soul();
            if !s.is_zero() {
                souls.push((name, s));
            }
        }
        Pullback { m, bodies, souls }
    }

    fn scalar(&self, c: &ScalarExpr) -> Result<SuperFunction> {
        let src = &self.m.source;
        let mut acc = SuperFunction::zero(src);
        self.taylor(c, 0, 0, &SuperFunction::one(src), &Rational::one(), &mut acc)?;
        Ok(acc)
    }

    /// Accumulates (1/α!) (∂^α c)(body) soul^α over multisets α built in
    /// nondecreasing index order.
    fn taylor(
        &self,
        d: &ScalarExpr,
        start: usize,
        mult: u32,
        prod: &SuperFunction,
        weight: &Rational,
        acc: &mut SuperFunction,
    ) -> Result<()> {
        let at_body = d.substitute(&self.bodies)?;
        let term = prod.scale(&at_body.scale(weight));
        *acc = &*acc + &term;
        for i in start..self.souls.len() {
            let (name, soul) = &self.souls[i];
            let di = d.derivative(name);
            if di.is_zero() {
                continue;
            }
            let p = prod * soul;
            if p.is_zero() {
                continue;
            }
            let k = if i == start { mult + 1 } else { 1 };
            let w = weight * Rational::new(BigInt::one(), BigInt::from(k));
            self.taylor(&di, i, k, &p, &w, acc)?;
        }
        Ok(())
    }

    fn apply(&self, f: &SuperFunction) -> Result<SuperFunction> {
        let src = &self.m.source;
        let mut out = SuperFunction::zero(src);
        for (mask, c) in f.terms() {
            let mut t = self.scalar(c)?;
            for j in f.monomial_coords(mask) {
                if t.is_zero() {
                    break;
                }
                t = &t * &self.m.assign[j];
            }
            out = &out + &t;
        }
        Ok(out)
    }
}

impl fmt::Display for SuperMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.assign.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} ↦ {}", self.target.name(i), a)?;
        }
        Ok(())
    }
}

/// τ or π: the bundle chart onto its base, q ↦ q, θ ↦ θ.
pub fn canonical_projection(total: &Chart) -> Result<SuperMorphism> {
    let base = sibling(total, ChartKind::Base)?;
    let assign = (0..base.len())
        .map(|i| {
            let j = total.lookup(base.name(i))?;
            Ok(SuperFunction::coordinate(total, j))
        })
        .collect::<Result<Vec<_>>>()?;
    SuperMorphism::new(total, &base, assign)
}

/// The closed imbeddings TM → STM (πv, πζ ↦ 0), T*M → ST*M (πp, πη ↦ 0)
/// and odd sector → ST*M (p, η ↦ 0). `total` is the super chart.
pub fn canonical_imbedding(total: &Chart, sub: ChartKind) -> Result<SuperMorphism> {
    let killed: &[Role] = match (total.kind(), sub) {
        (ChartKind::TangentSuper, ChartKind::Tangent) => &[Role::PiVelocity, Role::PiOddVelocity],
        (ChartKind::CotangentSuper, ChartKind::Cotangent) => &[Role::PiMomentum, Role::PiOddMomentum],
        (ChartKind::CotangentSuper, ChartKind::OddSector) => &[Role::Momentum, Role::OddMomentum],
        _ => {
            return Err(Error::ChartMismatch {
                expected: String::from("a super bundle chart and one of its canonical subcharts"),
                found: alloc::format!("{} and {}", total.kind().name(), sub.name()),
            })
        }
    };
    let small = sibling(total, sub)?;
    let assign = (0..total.len())
        .map(|i| {
            if killed.contains(&total.coord(i).role) {
                Ok(SuperFunction::zero(&small))
            } else {
                Ok(SuperFunction::coordinate(&small, small.lookup(total.name(i))?))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SuperMorphism::new(&small, total, assign)
}
