//! The super-Legendre transformation, its inverse for affine momentum maps,
//! and the Hamiltonian side.

use alloc::string::String;
use alloc::vec::Vec;

use crate::charts::{canonical_projection, role_index, sibling, ChartKind, SuperMorphism};
use crate::error::{Error, Result};
use crate::fields::SuperVectorField;
use crate::forms::{canonical_two_form, liouville_form, pullback, semibasic_along, GradedForm};
use crate::mechanics::{action, cartan_one_form, dynamics, energy, regularity, Dynamics, Equation};
use crate::superalgebra::{Chart, GradedMatrix, Parity, Role, SuperFunction};

/// FL: TM → T*M for even L, TM → odd sector for odd L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreMap {
    l: SuperFunction,
    parity: Parity,
    map: SuperMorphism,
}

/// Momentum roles on the target, paired with the velocity roles they
/// answer to.
fn momentum_roles(p: Parity) -> [(Role, Role, Role); 2] {
    match p {
        Parity::Even => [
            (Role::BaseEven, Role::Momentum, Role::Velocity),
            (Role::BaseOdd, Role::OddMomentum, Role::OddVelocity),
        ],
        Parity::Odd => [
            (Role::BaseEven, Role::PiMomentum, Role::Velocity),
            (Role::BaseOdd, Role::PiOddMomentum, Role::OddVelocity),
        ],
    }
}

/// Builds FL by matching Θ_L, read as a form along τ, against Θ₀ on the
/// parity-appropriate target: the dq̂ and dθ̂ coefficients become the images
/// of the momenta.
pub fn legendre(l: &SuperFunction) -> Result<LegendreMap> {
    let tm = l.chart().clone();
    if tm.kind() != ChartKind::Tangent {
        return Err(Error::ChartMismatch {
            expected: String::from("Lagrangian on a tangent chart"),
            found: String::from(tm.kind().name()),
        });
    }
    let parity = l.parity().ok_or(Error::NotHomogeneous)?;
    let tau = canonical_projection(&tm)?;
    let hat = semibasic_along(&cartan_one_form(l)?, &tau)?;
    let base = tau.target();
    let target = sibling(&tm, match parity {
        Parity::Even => ChartKind::Cotangent,
        Parity::Odd => ChartKind::OddSector,
    })?;
    let mut assign = alloc::vec![SuperFunction::zero(&tm); target.len()];
    for (i, c) in target.coords().iter().enumerate() {
        if c.role == Role::BaseEven || c.role == Role::BaseOdd {
            assign[i] = SuperFunction::coordinate(&tm, tm.lookup(&c.name)?);
        }
    }
    for (base_role, mom, _) in momentum_roles(parity) {
        for k in base.with_role(base_role) {
            let idx = base.coord(k).index;
            assign[role_index(&target, mom, idx)] = hat.coefficient(&[k]);
        }
    }
    let map = SuperMorphism::new(&tm, &target, assign)?;
    Ok(LegendreMap {
        l: l.clone(),
        parity,
        map,
    })
}

impl LegendreMap {
    pub fn lagrangian(&self) -> &SuperFunction {
        &self.l
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn morphism(&self) -> &SuperMorphism {
        &self.map
    }

    pub fn target(&self) -> &Chart {
        self.map.target()
    }

    /// Pairs (momentum name, image) in target chart order.
    pub fn momenta(&self) -> Vec<(String, SuperFunction)> {
        let t = self.target();
        (0..t.len())
            .filter(|&i| !t.coord(i).role.is_base())
            .map(|i| (String::from(t.name(i)), self.map.assignment(i).clone()))
            .collect()
    }

    /// FL*(Θ₀) − Θ_L.
    pub fn theta_residual(&self) -> Result<GradedForm> {
        let theta0 = liouville_form(self.target())?;
        pullback(&self.map, &theta0)?.checked_sub(&cartan_one_form(&self.l)?)
    }

    /// Inverse of an affine momentum map P = u·A + a, u = (P − a)·A⁻¹.
    pub fn invert(&self) -> Result<SuperMorphism> {
        let report = regularity(&self.l)?;
        if !report.is_regular() {
            return Err(Error::Degenerate(report.reasons.join("; ")));
        }
        let tm = self.map.source().clone();
        let target = self.target().clone();
        let mut moms = Vec::new();
        let mut vels = Vec::new();
        for (base_role, mom, vel) in momentum_roles(self.parity) {
            let count = target.with_role(base_role).len();
            for k in 1..=count {
                moms.push(role_index(&target, mom, k));
                vels.push(role_index(&tm, vel, k));
            }
        }
        let n = moms.len();
        // a[c][r] = ∂F_r/∂u_c so that F = u·a + offset as a row vector.
        let mut a = GradedMatrix::zeros(
            &tm,
            vels.iter().map(|&j| tm.parity(j)).collect(),
            moms.iter().map(|&k| target.parity(k)).collect(),
        );
        let mut offsets = Vec::with_capacity(n);
        for (r, &k) in moms.iter().enumerate() {
            let f = self.map.assignment(k);
            let mut rest = f.clone();
            for (c, &j) in vels.iter().enumerate() {
                let ajk = f.derivative(j);
                for &i in &vels {
                    if !ajk.derivative(i).is_zero() {
                        return Err(Error::NotAffine(alloc::format!(
                            "momentum {} is not affine in the velocities",
                            target.name(k)
                        )));
                    }
                }
                rest = &rest - &(&SuperFunction::coordinate(&tm, j) * &ajk);
                a.set(c, r, ajk);
            }
            if vels.iter().any(|&j| rest.depends_on(j)) {
                return Err(Error::NotAffine(alloc::format!(
                    "momentum {} is not affine in the velocities",
                    target.name(k)
                )));
            }
            offsets.push(rest.reexpress(&target)?);
        }
        let ainv = a.invert()?;
        let mut assign = alloc::vec![SuperFunction::zero(&target); tm.len()];
        for (i, c) in tm.coords().iter().enumerate() {
            if c.role.is_base() {
                assign[i] = SuperFunction::coordinate(&target, target.lookup(&c.name)?);
            }
        }
        for (c, &j) in vels.iter().enumerate() {
            let mut u = SuperFunction::zero(&target);
            for (r, &k) in moms.iter().enumerate() {
                let shifted = &SuperFunction::coordinate(&target, k) - &offsets[r];
                u = &u + &(&shifted * &ainv.get(r, c).reexpress(&target)?);
            }
            assign[j] = u;
        }
        let inv = SuperMorphism::new(&target, &tm, assign)?;
        if !inv.compose(&self.map)?.is_identity() || !self.map.compose(&inv)?.is_identity() {
            return Err(Error::NotAffine(String::from("inverse failed the round-trip check")));
        }
        Ok(inv)
    }
}

/// H, V and the residuals of the Hamiltonian identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianSystem {
    pub inverse: SuperMorphism,
    pub h: SuperFunction,
    pub v: SuperVectorField,
    pub dynamics: Dynamics,
    /// i_V Ω₀ − dH
    pub hamilton_residual: GradedForm,
    /// Γ_L ∘ FL* − FL* ∘ V on target coordinates.
    pub related_residual: Vec<SuperFunction>,
    /// FL* ∘ V ∘ (FL⁻¹)* − Γ_L on tangent coordinates.
    pub conjugation_residual: Vec<SuperFunction>,
    /// Θ₀(V) − (FL⁻¹)*(Δ L)
    pub action_residual: SuperFunction,
}

impl HamiltonianSystem {
    pub fn verified(&self) -> bool {
        self.hamilton_residual.is_zero()
            && self.related_residual.iter().all(|f| f.is_zero())
            && self.conjugation_residual.iter().all(|f| f.is_zero())
            && self.action_residual.is_zero()
    }

    /// ẏ = V(y) for every target coordinate y.
    pub fn equations(&self) -> Vec<Equation> {
        let t = self.v.chart();
        (0..t.len())
            .map(|i| Equation {
                coordinate: String::from(t.name(i)),
                rhs: self.v.component(i).clone(),
            })
            .collect()
    }
}

/// H = (FL⁻¹)*E_L and V = (FL⁻¹)* ∘ Γ_L ∘ FL*.
pub fn hamiltonian(fl: &LegendreMap) -> Result<HamiltonianSystem> {
    let inverse = fl.invert()?;
    let dynamics = dynamics(&fl.l)?;
    let target = fl.target().clone();
    let tm = fl.map.source().clone();
    let h = inverse.pullback(&energy(&fl.l)?)?;
    let mut comps = Vec::with_capacity(target.len());
    for k in 0..target.len() {
        let g = dynamics.gamma.apply(fl.map.assignment(k))?;
        comps.push(inverse.pullback(&g)?);
    }
    let v = SuperVectorField::new(&target, comps)?;
    let omega0 = canonical_two_form(&target)?;
    let dh = GradedForm::function(&h).exterior_derivative();
    let hamilton_residual = omega0.contract(&v)?.checked_sub(&dh)?;
    let mut related_residual = Vec::with_capacity(target.len());
    for k in 0..target.len() {
        let lhs = dynamics.gamma.apply(fl.map.assignment(k))?;
        let rhs = fl.map.pullback(v.component(k))?;
        related_residual.push(&lhs - &rhs);
    }
    let mut conjugation_residual = Vec::with_capacity(tm.len());
    for a in 0..tm.len() {
        let back = fl.map.pullback(&v.apply(inverse.assignment(a))?)?;
        conjugation_residual.push(&back - dynamics.gamma.component(a));
    }
    let theta0 = liouville_form(&target)?;
    let action_residual = &theta0.contract(&v)?.coefficient(&[]) - &inverse.pullback(&action(&fl.l)?)?;
    Ok(HamiltonianSystem {
        inverse,
        h,
        v,
        dynamics,
        hamilton_residual,
        related_residual,
        conjugation_residual,
        action_residual,
    })
}
