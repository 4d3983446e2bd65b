use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{make_chart, role_index, sibling, ChartKind, SuperMorphism};
use crate::error::{Error, Result};
use crate::scalar::{rational, ScalarExpr};
use crate::superalgebra::{Chart, GradedMatrix, Parity, Role, ScalarMatrix, SuperFunction};

/// Lifts a base-chart superfunction to a bundle chart over the same base.
fn lift(f: &SuperFunction, to: &Chart) -> SuperFunction {
    f.reexpress(to).expect("bundle chart contains its base coordinates")
}

/// Transition on tangent superbundle charts induced by a base transition:
///
///   q' , θ' as given,
///   v'  = Σ (∂q'/∂q) v  − Σ (∂q'/∂θ) ζ
///   ζ'  = Σ (∂θ'/∂q) v  + Σ (∂θ'/∂θ) ζ
///   πζ' = −Σ (∂θ'/∂q) πv + Σ (∂θ'/∂θ) πζ
///   πv' = Σ (∂q'/∂q) πv + Σ (∂q'/∂θ) πζ
///
/// with every derivative written to the left of the fiber coordinate.
pub fn induce_st_transition(t: &SuperMorphism) -> Result<SuperMorphism> {
    let (src_b, tgt_b) = (t.source(), t.target());
    if src_b.kind() != ChartKind::Base || tgt_b.kind() != ChartKind::Base {
        return Err(Error::ChartMismatch {
            expected: String::from("base charts"),
            found: alloc::format!("{} -> {}", src_b.kind().name(), tgt_b.kind().name()),
        });
    }
    let (a, d) = body_split(t)?;
    if a.inverse().is_err() || d.inverse().is_err() {
        return Err(Error::SingularBody);
    }
    let src = sibling(src_b, ChartKind::TangentSuper)?;
    let tgt = sibling(tgt_b, ChartKind::TangentSuper)?;
    let fib = |r: Role, k: usize| SuperFunction::coordinate(&src, role_index(&src, r, k));
    let qs = src_b.with_role(Role::BaseEven);
    let ths = src_b.with_role(Role::BaseOdd);
    // Σ (∂x/∂q^j) a^j + Σ (∂x/∂θ^β) b^β with the given signs
    let image = |x: &SuperFunction, a: Role, b: Role, sa: i64, sb: i64| -> SuperFunction {
        let mut acc = SuperFunction::zero(&src);
        for (j, &qj) in qs.iter().enumerate() {
            let dq = lift(&x.derivative(qj), &src);
            acc = &acc + &(&dq * &fib(a, j + 1)).scale_int(sa);
        }
        for (k, &tk) in ths.iter().enumerate() {
            let dt = lift(&x.derivative(tk), &src);
            acc = &acc + &(&dt * &fib(b, k + 1)).scale_int(sb);
        }
        acc
    };
    let mut assign = Vec::with_capacity(tgt.len());
    for i in 0..tgt.len() {
        let c = tgt.coord(i);
        let q_image = || t.assignment(role_index(tgt_b, Role::BaseEven, c.index));
        let th_image = || t.assignment(role_index(tgt_b, Role::BaseOdd, c.index));
        let f = match c.role {
            Role::BaseEven | Role::BaseOdd => lift(t.assignment_of(&c.name)?, &src),
            Role::Velocity => image(q_image(), Role::Velocity, Role::OddVelocity, 1, -1),
            Role::OddVelocity => image(th_image(), Role::Velocity, Role::OddVelocity, 1, 1),
            Role::PiOddVelocity => image(th_image(), Role::PiVelocity, Role::PiOddVelocity, -1, 1),
            Role::PiVelocity => image(q_image(), Role::PiVelocity, Role::PiOddVelocity, 1, 1),
            _ => unreachable!("tangent-super charts carry no momentum roles"),
        };
        assign.push(f);
    }
    SuperMorphism::new(&src, &tgt, assign)
}

/// (Ã, D̃): bodies of ∂q'/∂q and ∂θ'/∂θ.
pub fn body_split(t: &SuperMorphism) -> Result<(ScalarMatrix, ScalarMatrix)> {
    let (src, tgt) = (t.source(), t.target());
    let block = |r: Role| -> ScalarMatrix {
        let rows = tgt.with_role(r);
        let cols = src.with_role(r);
        let mut out = ScalarMatrix::zeros(rows.len(), cols.len());
        for (i, &ti) in rows.iter().enumerate() {
            for (j, &sj) in cols.iter().enumerate() {
                out.set(i, j, t.assignment(ti).derivative(sj).body());
            }
        }
        out
    };
    Ok((block(Role::BaseEven), block(Role::BaseOdd)))
}

/// Transition matrix of the odd tangent-super coordinates (θ, ζ, πv), built
/// from the expansion data of a base transition:
///
///   [[ψ, 0, 0], [∂ψ/∂q·v, ψ, 0], [−2 φ_{αβ} πζ^β, 0, ∂φ⁰/∂q]]
///
/// where θ'^α = ψ_{αβ} θ^β + …, q'^i = φ⁰^i + φ^i_{αβ} θ^α θ^β + … with φ^i
/// antisymmetric. Entries live on the source tangent-super chart and have
/// no odd part.
pub fn structural_transition(t: &SuperMorphism) -> Result<GradedMatrix> {
    let src_b = t.source();
    let tgt_b = t.target();
    let src = sibling(src_b, ChartKind::TangentSuper)?;
    let (m, n) = src_b.base_dims();
    let qs = src_b.with_role(Role::BaseEven);
    let ths = src_b.with_role(Role::BaseOdd);
    let tq = tgt_b.with_role(Role::BaseEven);
    let tt = tgt_b.with_role(Role::BaseOdd);
    let size = 2 * n + m;
    let mut out = GradedMatrix::zeros(&src, alloc::vec![Parity::Odd; size], alloc::vec![Parity::Odd; size]);
    let sc = |e: ScalarExpr| SuperFunction::scalar(&src, e).expect("even coefficient");
    let var = |r: Role, k: usize| ScalarExpr::var(src.name(role_index(&src, r, k)));

    // ψ_{αβ}: coefficient of θ^β in θ'^α
    let mut psi = ScalarMatrix::zeros(n, n);
    for (a, &ta) in tt.iter().enumerate() {
        let x = t.assignment(ta);
        for (b, _) in ths.iter().enumerate() {
            let mask = 1u64 << src_b.odd_bit(ths[b]).expect("odd");
            psi.set(a, b, x.coefficient(mask).cloned().unwrap_or_else(ScalarExpr::zero));
        }
    }
    for a in 0..n {
        for b in 0..n {
            out.set(a, b, sc(psi.get(a, b).clone()));
            out.set(n + a, n + b, sc(psi.get(a, b).clone()));
            let mut dv = ScalarExpr::zero();
            for (j, &qj) in qs.iter().enumerate() {
                let dpsi = psi.get(a, b).derivative(src_b.name(qj));
                dv = &dv + &(&dpsi * &var(Role::Velocity, j + 1));
            }
            out.set(n + a, b, sc(dv));
        }
    }
    for (i, &ti) in tq.iter().enumerate() {
        let x = t.assignment(ti);
        let phi0 = x.body();
        for (j, &qj) in qs.iter().enumerate() {
            out.set(2 * n + i, 2 * n + j, sc(phi0.derivative(src_b.name(qj))));
        }
        // φ^i_{αβ} = c/2 for α < β where c is the θ^αθ^β coefficient
        let phi = |a: usize, b: usize| -> ScalarExpr {
            if a == b {
                return ScalarExpr::zero();
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mask = (1u64 << src_b.odd_bit(ths[lo]).expect("odd")) | (1u64 << src_b.odd_bit(ths[hi]).expect("odd"));
            let c = x.coefficient(mask).cloned().unwrap_or_else(ScalarExpr::zero);
            let half = c.scale(&rational(1, 2));
            if a < b {
                half
            } else {
                -half
            }
        };
        for a in 0..n {
            let mut e = ScalarExpr::zero();
            for b in 0..n {
                e = &e + &(&phi(a, b) * &var(Role::PiOddVelocity, b + 1));
            }
            out.set(2 * n + i, a, sc(e.scale(&rational(-2, 1))));
        }
    }
    Ok(out)
}

/// Same matrix read off the induced transition: the body of the left
/// Jacobian ∂x'/∂x restricted to the odd coordinates (θ, ζ, πv).
pub fn structural_transition_from_jacobian(t: &SuperMorphism) -> Result<GradedMatrix> {
    let st = induce_st_transition(t)?;
    let src = st.source().clone();
    let tgt = st.target().clone();
    let (m, n) = t.source().base_dims();
    let order = |cs: &Chart| -> Vec<usize> {
        let mut v = cs.with_role(Role::BaseOdd);
        v.extend(cs.with_role(Role::OddVelocity));
        v.extend(cs.with_role(Role::PiVelocity));
        v
    };
    let (rows, cols) = (order(&tgt), order(&src));
    let size = 2 * n + m;
    let mut out = GradedMatrix::zeros(&src, alloc::vec![Parity::Odd; size], alloc::vec![Parity::Odd; size]);
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            let e = st.assignment(r).derivative(c).body();
            out.set(i, j, SuperFunction::scalar(&src, e)?);
        }
    }
    Ok(out)
}

/// A finite atlas of base charts of one type (m, n) with transitions
/// `t[(j, k)]`, a morphism from chart k's coordinates to chart j's.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub name: String,
    m: usize,
    n: usize,
    charts: Vec<String>,
    transitions: BTreeMap<(String, String), SuperMorphism>,
    pub batchelor: bool,
}

#[derive(Clone, Debug)]
pub struct TransitionReport {
    pub from: String,
    pub to: String,
    pub a_tilde: ScalarMatrix,
    pub d_tilde: ScalarMatrix,
    pub invertible: bool,
    /// Whether all quadratic soul terms of q' vanish.
    pub batchelor_normal: bool,
    /// Closed-form structural matrix equals the Jacobian-derived one.
    pub structural_routes_agree: bool,
}

#[derive(Clone, Debug)]
pub struct TripleReport {
    pub charts: [String; 3],
    pub base_cocycle: bool,
    pub st_cocycle: bool,
    /// Largest entry deviation of Ψ_ik − Ψ_ij(x_j(x))·Ψ_jk(x), if sampled.
    pub structural_max_error: Option<f64>,
    pub samples: usize,
}

#[derive(Clone, Debug)]
pub struct AtlasReport {
    pub transitions: Vec<TransitionReport>,
    pub triples: Vec<TripleReport>,
    pub batchelor_requested: bool,
}

impl AtlasReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.transitions.iter().all(|t| {
            t.invertible && t.structural_routes_agree && (!self.batchelor_requested || t.batchelor_normal)
        }) && self.triples.iter().all(|t| {
            t.base_cocycle && t.st_cocycle && t.structural_max_error.is_none_or(|e| e <= tol)
        })
    }
}

impl Atlas {
    pub fn new(name: &str, m: usize, n: usize) -> Atlas {
        Atlas {
            name: String::from(name),
            m,
            n,
            charts: Vec::new(),
            transitions: BTreeMap::new(),
            batchelor: false,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// The coordinate system every chart of the atlas uses.
    pub fn base_chart(&self) -> Chart {
        make_chart(ChartKind::Base, self.m, self.n)
    }

    pub fn add_chart(&mut self, id: &str, m: usize, n: usize) -> Result<()> {
        if (m, n) != (self.m, self.n) {
            return Err(Error::Atlas(alloc::format!(
                "chart {id} has type ({m}, {n}) but the atlas is ({}, {})",
                self.m, self.n
            )));
        }
        if self.charts.iter().any(|c| c == id) {
            return Err(Error::Atlas(alloc::format!("chart {id} declared twice")));
        }
        self.charts.push(String::from(id));
        Ok(())
    }

    pub fn charts(&self) -> &[String] {
        &self.charts
    }

    pub fn add_transition(
        &mut self,
        to: &str,
        from: &str,
        named: &BTreeMap<String, SuperFunction>,
    ) -> Result<()> {
        for id in [to, from] {
            if !self.charts.iter().any(|c| c == id) {
                return Err(Error::Atlas(alloc::format!("unknown chart {id}")));
            }
        }
        let cs = self.base_chart();
        let t = SuperMorphism::from_named(&cs, &cs, named)?;
        let key = (String::from(to), String::from(from));
        if self.transitions.insert(key, t).is_some() {
            return Err(Error::Atlas(alloc::format!("transition {to} {from} given twice")));
        }
        Ok(())
    }

    pub fn transition(&self, to: &str, from: &str) -> Option<&SuperMorphism> {
        self.transitions.get(&(String::from(to), String::from(from)))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&(String, String), &SuperMorphism)> {
        self.transitions.iter()
    }

    /// Runs every check; `points` are sample values for the even
    /// coordinates (q, v, πζ) of the tangent-super chart, in chart order.
    pub fn check(&self, points: &[Vec<f64>]) -> Result<AtlasReport> {
        let mut transitions = Vec::new();
        for ((to, from), t) in &self.transitions {
            let (a, d) = body_split(t)?;
            let invertible = a.inverse().is_ok() && d.inverse().is_ok();
            let mut batchelor_normal = true;
            let mut routes = false;
            if invertible {
                let direct = structural_transition(t)?;
                let jac = structural_transition_from_jacobian(t)?;
                routes = direct == jac;
                let (m, n) = (self.m, self.n);
                for i in 0..m {
                    for a in 0..n {
                        if !direct.get(2 * n + i, a).is_zero() {
                            batchelor_normal = false;
                        }
                    }
                }
            }
            transitions.push(TransitionReport {
                from: from.clone(),
                to: to.clone(),
                a_tilde: a,
                d_tilde: d,
                invertible,
                batchelor_normal,
                structural_routes_agree: routes,
            });
        }
        let mut triples = Vec::new();
        for i in &self.charts {
            for j in &self.charts {
                for k in &self.charts {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let (Some(tij), Some(tjk), Some(tik)) =
                        (self.transition(i, j), self.transition(j, k), self.transition(i, k))
                    else {
                        continue;
                    };
                    triples.push(self.check_triple([i, j, k], tij, tjk, tik, points)?);
                }
            }
        }
        Ok(AtlasReport {
            transitions,
            triples,
            batchelor_requested: self.batchelor,
        })
    }

    fn check_triple(
        &self,
        ids: [&String; 3],
        tij: &SuperMorphism,
        tjk: &SuperMorphism,
        tik: &SuperMorphism,
        points: &[Vec<f64>],
    ) -> Result<TripleReport> {
        let base_cocycle = tij.compose(tjk)? == *tik;
        let (sij, sjk, sik) = match (
            induce_st_transition(tij),
            induce_st_transition(tjk),
            induce_st_transition(tik),
        ) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => {
                return Ok(TripleReport {
                    charts: [ids[0].clone(), ids[1].clone(), ids[2].clone()],
                    base_cocycle,
                    st_cocycle: false,
                    structural_max_error: None,
                    samples: 0,
                })
            }
        };
        let st_cocycle = sij.compose(&sjk)? == sik;
        let pij = structural_transition(tij)?;
        let pjk = structural_transition(tjk)?;
        let pik = structural_transition(tik)?;
        let cs = sjk.source().clone();
        let evens: Vec<usize> = (0..cs.len()).filter(|&i| !cs.parity(i).is_odd()).collect();
        let mut worst: Option<f64> = None;
        let mut samples = 0;
        for pt in points {
            if pt.len() != evens.len() {
                return Err(Error::DimensionMismatch {
                    expected: evens.len(),
                    found: pt.len(),
                });
            }
            let env = |name: &str| -> Option<f64> {
                evens.iter().position(|&i| cs.name(i) == name).map(|k| pt[k])
            };
            // x_j(x): bodies of the induced even assignments of t_jk
            let mut mid = Vec::with_capacity(evens.len());
            for &e in &evens {
                match sjk.assignment(e).body().eval_f64(&env) {
                    Some(v) => mid.push(v),
                    None => break,
                }
            }
            if mid.len() != evens.len() {
                continue;
            }
            let env_mid = |name: &str| -> Option<f64> {
                evens.iter().position(|&i| cs.name(i) == name).map(|k| mid[k])
            };
            let (Some(a), Some(b), Some(c)) = (
                pij.body().eval_f64(&env_mid),
                pjk.body().eval_f64(&env),
                pik.body().eval_f64(&env),
            ) else {
                continue;
            };
            let size = a.len();
            let mut err: f64 = 0.0;
            for r in 0..size {
                for s in 0..size {
                    let mut prod = 0.0;
                    for k in 0..size {
                        prod += a[r][k] * b[k][s];
                    }
                    err = err.max((prod - c[r][s]).abs());
                }
            }
            worst = Some(worst.map_or(err, |w: f64| w.max(err)));
            samples += 1;
        }
        Ok(TripleReport {
            charts: [ids[0].clone(), ids[1].clone(), ids[2].clone()],
            base_cocycle,
            st_cocycle,
            structural_max_error: worst,
            samples,
        })
    }
}
