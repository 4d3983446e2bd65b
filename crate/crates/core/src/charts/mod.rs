//! Canonical bundle charts, superdomain morphisms and atlases.

mod atlas;
mod morphism;

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::Result;
pub use crate::superalgebra::ChartKind;
use crate::superalgebra::{Chart, Coordinate, CoordinateSystem, Role};

pub use atlas::{
    body_split, induce_st_transition, structural_transition, structural_transition_from_jacobian,
    Atlas, AtlasReport, TransitionReport, TripleReport,
};
pub use morphism::{canonical_imbedding, canonical_projection, SuperMorphism};

/// Names of the base coordinates (q^i and θ^α) a chart family is built on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseNames {
    pub even: Vec<Arc<str>>,
    pub odd: Vec<Arc<str>>,
}

impl BaseNames {
    /// q1..qm and th1..thn.
    pub fn standard(m: usize, n: usize) -> BaseNames {
        let mk = |p: &str, k: usize| -> Arc<str> { Arc::from(alloc::format!("{p}{k}").as_str()) };
        BaseNames {
            even: (1..=m).map(|k| mk("q", k)).collect(),
            odd: (1..=n).map(|k| mk("th", k)).collect(),
        }
    }

    pub fn new<S: AsRef<str>>(even: &[S], odd: &[S]) -> BaseNames {
        BaseNames {
            even: even.iter().map(|s| Arc::from(s.as_ref())).collect(),
            odd: odd.iter().map(|s| Arc::from(s.as_ref())).collect(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.even.len(), self.odd.len())
    }

    /// Reads the base names back off any chart of the family.
    pub fn of(cs: &CoordinateSystem) -> BaseNames {
        let pick = |r: Role| -> Vec<Arc<str>> {
            cs.with_role(r).into_iter().map(|i| cs.coord(i).name.clone()).collect()
        };
        BaseNames {
            even: pick(Role::BaseEven),
            odd: pick(Role::BaseOdd),
        }
    }
}

fn block(out: &mut Vec<Coordinate>, names: &BaseNames, role: Role) {
    let count = match role {
        Role::BaseEven => names.even.len(),
        Role::BaseOdd => names.odd.len(),
        Role::Velocity | Role::PiVelocity | Role::Momentum | Role::PiMomentum => names.even.len(),
        _ => names.odd.len(),
    };
    for k in 1..=count {
        let name: Arc<str> = match role {
            Role::BaseEven => names.even[k - 1].clone(),
            Role::BaseOdd => names.odd[k - 1].clone(),
            r => Arc::from(alloc::format!("{}{}", r.prefix(), k).as_str()),
        };
        out.push(Coordinate {
            name,
            parity: role.parity(),
            role,
            index: k,
        });
    }
}

/// Role layout of each canonical chart, in coordinate order.
pub fn layout(kind: ChartKind) -> &'static [Role] {
    use Role::*;
    match kind {
        ChartKind::Base => &[BaseEven, BaseOdd],
        ChartKind::TangentSuper => &[BaseEven, Velocity, PiOddVelocity, BaseOdd, OddVelocity, PiVelocity],
        ChartKind::Tangent => &[BaseEven, Velocity, BaseOdd, OddVelocity],
        ChartKind::CotangentSuper => &[BaseEven, Momentum, PiOddMomentum, BaseOdd, OddMomentum, PiMomentum],
        ChartKind::Cotangent => &[BaseEven, Momentum, BaseOdd, OddMomentum],
        ChartKind::OddSector => &[BaseEven, PiOddMomentum, BaseOdd, PiMomentum],
        ChartKind::Custom => &[],
    }
}

/// Canonical chart over the given base names; fails on name collisions
/// between base and fiber coordinates.
pub fn chart_with_names(kind: ChartKind, names: &BaseNames) -> Result<Chart> {
    let mut coords = Vec::new();
    for r in layout(kind) {
        block(&mut coords, names, *r);
    }
    Ok(Arc::new(CoordinateSystem::new(kind, coords)?))
}

/// Canonical chart with standard names q1.., th1.., v1.., z1.., pz1..,
/// pv1.., p1.., eta1.., peta1.., pp1...
pub fn make_chart(kind: ChartKind, m: usize, n: usize) -> Chart {
    chart_with_names(kind, &BaseNames::standard(m, n)).expect("standard names never collide")
}

/// Chart of another kind over the same base coordinates.
pub fn sibling(cs: &CoordinateSystem, kind: ChartKind) -> Result<Chart> {
    chart_with_names(kind, &BaseNames::of(cs))
}

/// Looks up the chart index of a role/index pair, panicking if the chart
/// does not carry that role. Used on charts built by this module.
pub fn role_index(cs: &CoordinateSystem, role: Role, k: usize) -> usize {
    cs.find_role(role, k)
        .unwrap_or_else(|| panic!("chart {} has no {}{}", cs.describe(), role.prefix(), k))
}

#[cfg(test)]
mod tests;
