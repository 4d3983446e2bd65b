//! Cartan forms, energy, regularity and the dynamical field of a
//! super-Lagrangian.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::charts::{role_index, ChartKind};
use crate::error::{Error, Result};
use crate::fields::{liouville_field, SuperVectorField, VerticalEndomorphism};
use crate::forms::GradedForm;
use crate::superalgebra::{Chart, GradedMatrix, Parity, Role, ScalarMatrix, SuperFunction};

/// Θ_L = dL∘S: the 1-form Σ dx^a S(∂_a)(L), stored coefficient-left.
pub fn cartan_one_form(l: &SuperFunction) -> Result<GradedForm> {
    let cs = l.chart().clone();
    let s = VerticalEndomorphism::new(&cs)?;
    let mut coeffs = Vec::with_capacity(cs.len());
    for a in 0..cs.len() {
        let g = s.apply(&SuperVectorField::partial(&cs, a))?.apply(l)?;
        let mut c = g.even_part();
        if cs.parity(a).is_odd() {
            c = &c - &g.odd_part();
        } else {
            c = &c + &g.odd_part();
        }
        coeffs.push(c);
    }
    GradedForm::one_form(&cs, &coeffs)
}

/// Ω_L = −dΘ_L.
pub fn cartan_two_form(l: &SuperFunction) -> Result<GradedForm> {
    Ok(cartan_one_form(l)?.exterior_derivative().scale_int(-1))
}

/// Δ(L), written A.
pub fn action(l: &SuperFunction) -> Result<SuperFunction> {
    liouville_field(l.chart())?.apply(l)
}

/// E_L = Δ(L) − L.
pub fn energy(l: &SuperFunction) -> Result<SuperFunction> {
    Ok(&action(l)? - l)
}

fn lagrangian_parity(l: &SuperFunction) -> Result<Parity> {
    if l.chart().kind() != ChartKind::Tangent {
        return Err(Error::ChartMismatch {
            expected: String::from("Lagrangian on a tangent chart"),
            found: String::from(l.chart().kind().name()),
        });
    }
    l.parity().ok_or(Error::NotHomogeneous)
}

/// ∂_{r1,i} ∂_{r2,j} L, the right derivative applied first.
fn hessian(l: &SuperFunction, r1: Role, r2: Role, n1: usize, n2: usize) -> GradedMatrix {
    let cs = l.chart();
    let mut rows = Vec::with_capacity(n1);
    for i in 1..=n1 {
        let a = role_index(cs, r1, i);
        rows.push(
            (1..=n2)
                .map(|j| l.derivative(role_index(cs, r2, j)).derivative(a))
                .collect::<Vec<_>>(),
        );
    }
    let ps = |r: Role, n: usize| alloc::vec![r.parity(); n];
    let mut m = GradedMatrix::zeros(cs, ps(r1, n1), ps(r2, n2));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, e) in row.into_iter().enumerate() {
            m.set(i, j, e);
        }
    }
    m
}

fn body_invertible(m: &GradedMatrix) -> Result<bool> {
    Ok(m.rows() == m.cols() && m.body_rank()? == m.rows())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianBlock {
    /// e.g. "d2L/dv dv"
    pub label: String,
    /// Operator order used for entry (i, j).
    pub order: String,
    pub matrix: GradedMatrix,
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub parity: Parity,
    pub blocks: Vec<HessianBlock>,
    pub omega_rank: usize,
    pub omega_dim: usize,
    /// Verdict of the Hessian criterion.
    pub criterion_regular: bool,
    pub reasons: Vec<String>,
}

impl RegularityReport {
    pub fn omega_nondegenerate(&self) -> bool {
        self.omega_rank == self.omega_dim
    }

    /// Hessian criterion and Ω_L body rank give the same answer.
    pub fn criteria_agree(&self) -> bool {
        self.criterion_regular == self.omega_nondegenerate()
    }

    pub fn is_regular(&self) -> bool {
        self.criterion_regular && self.omega_nondegenerate()
    }
}

impl fmt::Display for RegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parity: {}", self.parity)?;
        for b in &self.blocks {
            writeln!(f, "{} [{}]: {}", b.label, b.order, if b.invertible { "invertible" } else { "singular" })?;
        }
        writeln!(f, "omega body rank: {}/{}", self.omega_rank, self.omega_dim)?;
        write!(f, "verdict: {}", if self.is_regular() { "regular" } else { "degenerate" })?;
        for r in &self.reasons {
            write!(f, "\n  {r}")?;
        }
        Ok(())
    }
}

pub fn regularity(l: &SuperFunction) -> Result<RegularityReport> {
    let parity = lagrangian_parity(l)?;
    let cs = l.chart();
    let (m, n) = cs.base_dims();
    let mut blocks = Vec::new();
    let mut reasons = Vec::new();
    let criterion_regular = match parity {
        Parity::Even => {
            let vv = hessian(l, Role::Velocity, Role::Velocity, m, m);
            let zz = hessian(l, Role::OddVelocity, Role::OddVelocity, n, n);
            let (iv, iz) = (body_invertible(&vv)?, body_invertible(&zz)?);
            if !iv {
                reasons.push(String::from("velocity Hessian d2L/dv dv is singular"));
            }
            if !iz {
                reasons.push(String::from("odd-velocity Hessian d2L/dz dz is singular"));
            }
            blocks.push(HessianBlock {
                label: String::from("d2L/dv dv"),
                order: String::from("(i,j) = d/dv_i (d/dv_j L)"),
                matrix: vv,
                invertible: iv,
            });
            blocks.push(HessianBlock {
                label: String::from("d2L/dz dz"),
                order: String::from("(a,b) = d/dz_a (d/dz_b L)"),
                matrix: zz,
                invertible: iz,
            });
            iv && iz
        }
        Parity::Odd => {
            let zv = hessian(l, Role::OddVelocity, Role::Velocity, n, m);
            let inv = m == n && body_invertible(&zv)?;
            if m != n {
                reasons.push(alloc::format!("odd Lagrangian needs m = n, got m = {m}, n = {n}"));
            } else if !inv {
                reasons.push(String::from("mixed Hessian d2L/dz dv is singular"));
            }
            blocks.push(HessianBlock {
                label: String::from("d2L/dz dv"),
                order: String::from("(a,j) = d/dz_a (d/dv_j L)"),
                matrix: zv,
                invertible: inv,
            });
            inv
        }
    };
    let omega = cartan_two_form(l)?;
    let omega_rank = omega.form_matrix().body_rank()?;
    let omega_dim = cs.len();
    if omega_rank < omega_dim {
        reasons.push(alloc::format!("Omega_L body rank {omega_rank} < {omega_dim}"));
    }
    Ok(RegularityReport {
        parity,
        blocks,
        omega_rank,
        omega_dim,
        criterion_regular,
        reasons,
    })
}

/// Γ_L together with the residuals of the identities it must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dynamics {
    pub gamma: SuperVectorField,
    /// i_Γ Ω_L − dE_L
    pub symplectic_residual: GradedForm,
    /// S(Γ) − Δ
    pub sode_residual: SuperVectorField,
    /// i_Γ Θ_L − Δ(L)
    pub action_residual: SuperFunction,
}

impl Dynamics {
    pub fn verified(&self) -> bool {
        self.symplectic_residual.is_zero() && self.sode_residual.is_zero() && self.action_residual.is_zero()
    }
}

/// Solves i_Γ Ω_L = dE_L for the even field Γ on a tangent chart.
///
/// With N_ab = ι_{∂b} ι_{∂a} Ω_L the equations read
/// Σ_a Γ^a (−1)^{|a||b|} N_ab = ∂_b E_L.
pub fn dynamics(l: &SuperFunction) -> Result<Dynamics> {
    let report = regularity(l)?;
    if !report.is_regular() {
        return Err(Error::Degenerate(report.reasons.join("; ")));
    }
    let cs = l.chart().clone();
    let theta = cartan_one_form(l)?;
    let omega = theta.exterior_derivative().scale_int(-1);
    let e = energy(l)?;
    let mut mm = omega.form_matrix();
    for a in 0..cs.len() {
        for b in 0..cs.len() {
            if cs.parity(a).is_odd() && cs.parity(b).is_odd() {
                let x = mm.get(a, b).scale_int(-1);
                mm.set(a, b, x);
            }
        }
    }
    let inv = mm.invert().map_err(|_| Error::Degenerate(String::from("Omega_L matrix is singular")))?;
    let grad: Vec<SuperFunction> = (0..cs.len()).map(|b| e.derivative(b)).collect();
    let mut comps = Vec::with_capacity(cs.len());
    for a in 0..cs.len() {
        let mut c = SuperFunction::zero(&cs);
        for (b, g) in grad.iter().enumerate() {
            c = &c + &(g * inv.get(b, a));
        }
        comps.push(c);
    }
    let gamma = SuperVectorField::new(&cs, comps)?;
    let de = GradedForm::function(&e).exterior_derivative();
    let symplectic_residual = omega.contract(&gamma)?.checked_sub(&de)?;
    let s = VerticalEndomorphism::new(&cs)?;
    let sode_residual = s.apply(&gamma)?.checked_sub(&liouville_field(&cs)?)?;
    let action_residual = &theta.contract(&gamma)?.coefficient(&[]) - &action(l)?;
    let d = Dynamics {
        gamma,
        symplectic_residual,
        sode_residual,
        action_residual,
    };
    if !d.symplectic_residual.is_zero() {
        return Err(Error::Degenerate(String::from("solved field leaves a nonzero residual")));
    }
    Ok(d)
}

/// One first-order equation ẋ = rhs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub coordinate: String,
    pub rhs: SuperFunction,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d/dt {} = {}", self.coordinate, self.rhs)
    }
}

/// Reads Γ_L off as q̇ = …, v̇ = …, θ̇ = …, ζ̇ = … in chart order.
pub fn euler_lagrange(l: &SuperFunction) -> Result<Vec<Equation>> {
    let d = dynamics(l)?;
    let cs: &Chart = d.gamma.chart();
    Ok((0..cs.len())
        .map(|a| Equation {
            coordinate: String::from(cs.name(a)),
            rhs: d.gamma.component(a).clone(),
        })
        .collect())
}

/// The body matrix of Ω_L, exposed for rank studies.
pub fn omega_body(l: &SuperFunction) -> Result<ScalarMatrix> {
    Ok(cartan_two_form(l)?.form_matrix().body())
}

#[cfg(test)]
mod tests;
