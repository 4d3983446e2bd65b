//! Built-in verification suites. Every check runs a fixed number of seeded
//! random cases, or a fixed list of models and atlases, and counts
//! failures.

use std::collections::BTreeMap;

use rand::Rng;
use supermech_core::charts::{
    body_split, induce_st_transition, make_chart, ChartKind, SuperMorphism,
};
use supermech_core::fields::{lift_determinacy, SuperVectorField, VerticalEndomorphism};
use supermech_core::forms::{
    canonical_two_form, interior_product, liouville_form, one_form_section, pullback, GradedForm,
};
use supermech_core::legendre::{hamiltonian, legendre};
use supermech_core::mechanics::{cartan_one_form, dynamics, regularity};
use supermech_core::scalar::{ExprTree, Func};
use supermech_core::{Chart, GradedMatrix, Parity, ScalarExpr, SuperFunction};

use crate::atlas_check::{atlas_check, STRUCTURAL_TOL};
use crate::bundled;
use crate::gen::Gen;
use crate::model::ModelSpec;
use crate::oracle::Dense;
use crate::report::{Report, Section};

pub const SUITES: [&str; 5] = ["algebra", "forms", "cartan", "legendre", "atlas"];

/// Randomized cases per algebraic identity.
pub const ALGEBRA_CASES: usize = 200;
/// Randomized cases per calculus identity.
pub const FORMS_CASES: usize = 100;
/// Relative tolerance of every numeric oracle comparison.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, or a measured quantity such as an oracle error.
    pub detail: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

struct Tally {
    suite: &'static str,
    name: String,
    cases: usize,
    failures: usize,
    detail: Option<String>,
}

impl Tally {
    fn new(suite: &'static str, name: &str) -> Self {
        Tally {
            suite,
            name: name.to_string(),
            cases: 0,
            failures: 0,
            detail: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(what());
            }
        }
    }

    fn done(self) -> Check {
        Check {
            suite: self.suite,
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            detail: self.detail,
        }
    }
}

fn sign(p: Parity, q: Parity) -> i64 {
    if p.is_odd() && q.is_odd() {
        -1
    } else {
        1
    }
}

fn odd_chart(g: &mut Gen) -> Chart {
    let (m, n) = [(1, 2), (2, 3), (1, 4), (0, 3)][g.int(0, 3) as usize];
    make_chart(ChartKind::Base, m, n)
}

/// Tree evaluation that refuses points near a pole.
fn eval_guarded(t: &ExprTree, env: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
    let v = match t {
        ExprTree::Num(_) | ExprTree::Var(_) => t.eval_f64(env)?,
        ExprTree::Neg(a) => -eval_guarded(a, env)?,
        ExprTree::Add(xs) => xs.iter().map(|x| eval_guarded(x, env)).sum::<Option<f64>>()?,
        ExprTree::Sub(a, b) => eval_guarded(a, env)? - eval_guarded(b, env)?,
        ExprTree::Mul(xs) => xs.iter().map(|x| eval_guarded(x, env)).product::<Option<f64>>()?,
        ExprTree::Div(a, b) => {
            let d = eval_guarded(b, env)?;
            if d.abs() < 1e-2 {
                return None;
            }
            eval_guarded(a, env)? / d
        }
        ExprTree::Pow(a, e) => eval_guarded(a, env)?.powi(*e as i32),
        ExprTree::Call(f, a) => {
            let x = eval_guarded(a, env)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
            }
        }
    };
    (v.is_finite() && v.abs() < 1e6).then_some(v)
}

fn close(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn env_of(vals: &BTreeMap<String, f64>) -> impl Fn(&str) -> Option<f64> + '_ {
    move |n: &str| vals.get(n).copied()
}

fn random_point(g: &mut Gen, cs: &Chart) -> BTreeMap<String, f64> {
    cs.even_names().map(|n| (n.to_string(), g.rng().gen_range(-2.0..=2.0))).collect()
}

fn dense(f: &SuperFunction, env: &dyn Fn(&str) -> Option<f64>) -> Option<Dense> {
    Some(Dense::from_map(f.chart().odd_count(), &f.eval_coefficients(env)?))
}

pub fn algebra(seed: u64) -> Vec<Check> {
    const S: &str = "algebra";
    let mut out = Vec::new();
    let mut g = Gen::new(seed);

    let mut t = Tally::new(S, "super-commutativity f g = (-1)^{|f||g|} g f");
    for _ in 0..ALGEBRA_CASES {
        let cs = odd_chart(&mut g);
        let (f, pf) = g.homogeneous(&cs, 3);
        let (h, ph) = g.homogeneous(&cs, 3);
        let ok = (&(&f * &h) - &(&h * &f).scale_int(sign(pf, ph))).is_zero();
        t.record(ok, || format!("f = {f}, g = {h}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "odd derivatives anticommute");
    for _ in 0..ALGEBRA_CASES {
        let cs = odd_chart(&mut g);
        let f = g.superfunction(&cs, None, 4);
        let odd = cs.odd_count() as u32;
        let a = cs.odd_coord(g.int(0, odd as i64 - 1) as u32);
        let b = cs.odd_coord(g.int(0, odd as i64 - 1) as u32);
        let ok = (&f.derivative(b).derivative(a) + &f.derivative(a).derivative(b)).is_zero();
        t.record(ok, || format!("f = {f}, {} {}", cs.name(a), cs.name(b)));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "left Leibniz rule");
    for _ in 0..ALGEBRA_CASES {
        let cs = odd_chart(&mut g);
        let (f, pf) = g.homogeneous(&cs, 3);
        let h = g.superfunction(&cs, None, 3);
        let x = g.int(0, cs.len() as i64 - 1) as usize;
        let lhs = (&f * &h).derivative(x);
        let rhs = &(&f.derivative(x) * &h) + &(&f * &h.derivative(x)).scale_int(sign(cs.parity(x), pf));
        t.record(lhs == rhs, || format!("f = {f}, g = {h}, x = {}", cs.name(x)));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "superfunction inverse round trip");
    for _ in 0..ALGEBRA_CASES {
        let cs = odd_chart(&mut g);
        let f = g.invertible(&cs);
        let ok = f.invert().map(|i| (&f * &i).is_one() && (&i * &f).is_one()).unwrap_or(false);
        t.record(ok, || format!("f = {f}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "graded matrix inverse round trip");
    let cs = make_chart(ChartKind::Base, 1, 3);
    for _ in 0..ALGEBRA_CASES {
        let size = g.int(1, 3) as usize;
        let parities: Vec<Parity> = (0..size).map(|_| g.parity()).collect();
        let a = g.graded_matrix(&cs, &parities);
        let id = GradedMatrix::identity(&cs, parities.clone());
        let ok = a.invert().is_ok_and(|ai| a.mul(&ai).is_ok_and(|p| p == id) && ai.mul(&a).is_ok_and(|p| p == id));
        t.record(ok, || format!("{a:?}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "exterior-algebra oracle: products");
    let mut worst: f64 = 0.0;
    while t.cases < ALGEBRA_CASES {
        let cs = odd_chart(&mut g);
        let f = g.superfunction(&cs, None, 4);
        let h = g.superfunction(&cs, None, 4);
        let pt = random_point(&mut g, &cs);
        let env = env_of(&pt);
        let (Some(sym), Some(df), Some(dh)) = (dense(&(&f * &h), &env), dense(&f, &env), dense(&h, &env)) else {
            continue;
        };
        let err = sym.distance(&df.mul(&dh));
        worst = worst.max(err);
        t.record(err <= ORACLE_TOL, || format!("f = {f}, g = {h}, error {err:e}"));
    }
    t.detail.get_or_insert(format!("max relative error {worst:.3e}, tol {ORACLE_TOL:e}"));
    out.push(t.done());

    let mut t = Tally::new(S, "exterior-algebra oracle: left derivatives");
    let mut worst: f64 = 0.0;
    while t.cases < ALGEBRA_CASES {
        let cs = odd_chart(&mut g);
        let f = g.superfunction(&cs, None, 5);
        let b = g.int(0, cs.odd_count() as i64 - 1) as u32;
        let pt = random_point(&mut g, &cs);
        let env = env_of(&pt);
        let (Some(sym), Some(df)) = (dense(&f.derivative(cs.odd_coord(b)), &env), dense(&f, &env)) else {
            continue;
        };
        let err = sym.distance(&df.derivative(b));
        worst = worst.max(err);
        t.record(err <= ORACLE_TOL, || format!("f = {f}, generator {b}, error {err:e}"));
    }
    t.detail.get_or_insert(format!("max relative error {worst:.3e}, tol {ORACLE_TOL:e}"));
    out.push(t.done());

    let vars = ["q", "r", "p"];
    let mut t = Tally::new(S, "normal forms: + and * commute");
    for _ in 0..ALGEBRA_CASES {
        let (a, b) = (g.tree(&vars, 3), g.tree(&vars, 3));
        let (Ok(x), Ok(y)) = (a.normalize(), b.normalize()) else {
            t.record(true, String::new);
            continue;
        };
        t.record(&x + &y == &y + &x && &x * &y == &y * &x, || format!("{a} , {b}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "derivative is additive and obeys the product rule");
    for _ in 0..ALGEBRA_CASES {
        let (a, b) = (g.tree(&vars[..2], 2), g.tree(&vars[..2], 2));
        let (Ok(x), Ok(y)) = (a.normalize(), b.normalize()) else {
            t.record(true, String::new);
            continue;
        };
        let sum = (&x + &y).derivative("q") == &x.derivative("q") + &y.derivative("q");
        let prod = (&x * &y).derivative("q") == &(&x.derivative("q") * &y) + &(&x * &y.derivative("q"));
        t.record(sum && prod, || format!("{a} , {b}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "numeric oracle: normalized vs written expression");
    let mut worst: f64 = 0.0;
    let mut attempts = 0;
    while t.cases < ALGEBRA_CASES && attempts < 50 * ALGEBRA_CASES {
        attempts += 1;
        let a = g.tree(&vars, 3);
        let Ok(x) = a.normalize() else { continue };
        let pt: BTreeMap<String, f64> = vars.iter().map(|v| (v.to_string(), g.rng().gen_range(-2.0..=2.0))).collect();
        let env = env_of(&pt);
        let (Some(want), Some(got)) = (eval_guarded(&a, &env), x.eval_f64(&env)) else {
            continue;
        };
        let err = close(want, got);
        worst = worst.max(err);
        t.record(err <= ORACLE_TOL, || format!("{a} at {pt:?}: {want} vs {got}"));
    }
    t.detail.get_or_insert(format!("max relative error {worst:.3e}, tol {ORACLE_TOL:e}"));
    out.push(t.done());
    out
}

pub fn forms(seed: u64) -> Vec<Check> {
    const S: &str = "forms";
    let mut out = Vec::new();
    let mut g = Gen::new(seed);
    let charts = [make_chart(ChartKind::Base, 1, 2), make_chart(ChartKind::Tangent, 1, 1)];

    let mut t = Tally::new(S, "d o d = 0");
    for i in 0..FORMS_CASES {
        let w = g.form(&charts[i % 2], 2, 3);
        t.record(w.exterior_derivative().exterior_derivative().is_zero(), || format!("{w}"));
    }
    out.push(t.done());

    let b = &charts[0];
    let mut t = Tally::new(S, "pullback functoriality (phi o psi)* = psi* phi*");
    for _ in 0..FORMS_CASES {
        let (phi, psi) = (g.morphism(b), g.morphism(b));
        let w = g.form(b, 2, 2);
        let ok = phi
            .compose(&psi)
            .and_then(|c| pullback(&c, &w))
            .and_then(|lhs| Ok(lhs == pullback(&psi, &pullback(&phi, &w)?)?))
            .unwrap_or(false);
        t.record(ok, || format!("w = {w}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "d-naturality phi* d = d phi*");
    for _ in 0..FORMS_CASES {
        let phi = g.morphism(b);
        let w = g.form(b, 2, 2);
        let ok = pullback(&phi, &w.exterior_derivative())
            .and_then(|lhs| Ok(lhs == pullback(&phi, &w)?.exterior_derivative()))
            .unwrap_or(false);
        t.record(ok, || format!("w = {w}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "pullback respects wedge");
    for _ in 0..FORMS_CASES {
        let phi = g.morphism(b);
        let (x, y) = (g.form(b, 1, 2), g.form(b, 1, 2));
        let ok = (|| -> supermech_core::Result<bool> {
            Ok(pullback(&phi, &x.wedge(&y)?)? == pullback(&phi, &x)?.wedge(&pullback(&phi, &y)?)?)
        })()
        .unwrap_or(false);
        t.record(ok, || format!("{x} , {y}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "i_X df = (-1)^{|X||f|} X(f)");
    for i in 0..FORMS_CASES {
        let cs = &charts[i % 2];
        let (f, pf) = g.homogeneous(cs, 3);
        let p = g.parity();
        let comps = (0..cs.len()).map(|a| g.superfunction(cs, Some(cs.parity(a) + p), 2)).collect();
        let x = SuperVectorField::new(cs, comps).expect("component count matches");
        let ok = interior_product(&x, &GradedForm::function(&f).exterior_derivative())
            .and_then(|l| Ok(l.coefficient(&[]) == x.apply(&f)?.scale_int(sign(p, pf))))
            .unwrap_or(false);
        t.record(ok, || format!("f = {f}, X = {x}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "one-form sections pull back theta_0 to the form");
    for _ in 0..20 {
        let cs = [make_chart(ChartKind::Base, 1, 2), make_chart(ChartKind::Base, 2, 1)][g.int(0, 1) as usize].clone();
        let coeffs: Vec<SuperFunction> = (0..cs.len()).map(|_| g.superfunction(&cs, None, 3)).collect();
        let w = GradedForm::one_form(&cs, &coeffs).expect("length matches");
        let ok = one_form_section(&w)
            .and_then(|s| Ok(pullback(&s, &liouville_form(s.target())?)? == w))
            .unwrap_or(false);
        t.record(ok, || format!("w = {w}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "omega_0 body rank: full on T*M, deficient on ST*M");
    let mut detail = Vec::new();
    for (m, n) in [(1, 1), (2, 1), (1, 2)] {
        let ranks = |k: ChartKind| -> (usize, usize) {
            let c = make_chart(k, m, n);
            let r = canonical_two_form(&c).and_then(|w| w.form_matrix().body_rank()).unwrap_or(usize::MAX);
            (r, c.len())
        };
        let (rt, dt) = ranks(ChartKind::Cotangent);
        let (rs, ds) = ranks(ChartKind::CotangentSuper);
        detail.push(format!("({m},{n}): T*M {rt}/{dt}, ST*M {rs}/{ds}"));
        t.record(rt == dt && rs < ds, || detail.join("; "));
    }
    t.detail.get_or_insert(detail.join("; "));
    out.push(t.done());
    out
}

fn family() -> Vec<(ModelSpec, bool)> {
    (0..bundled::REGULARITY_FAMILY.len())
        .map(|i| (bundled::family_model(i), bundled::REGULARITY_FAMILY[i].3))
        .collect()
}

fn regular_models() -> Vec<ModelSpec> {
    let mut out: Vec<ModelSpec> = bundled::REGULAR_MODELS.iter().map(|n| bundled::model(n)).collect();
    out.extend(family().into_iter().filter(|(_, r)| *r).map(|(m, _)| m));
    out
}

pub fn cartan(seed: u64) -> Vec<Check> {
    const S: &str = "cartan";
    let mut out = Vec::new();
    let mut g = Gen::new(seed);
    let dims = [(1, 1), (1, 2), (2, 1), (2, 2)];

    let mut t = Tally::new(S, "S o S = 0 and Im S = ker S on TM");
    for (m, n) in dims {
        let tm = make_chart(ChartKind::Tangent, m, n);
        let ok = (|| -> supermech_core::Result<bool> {
            let s = VerticalEndomorphism::new(&tm)?.matrix()?;
            let rank = s.body_rank()?;
            Ok(s.mul(&s)?.is_zero() && rank == m + n && tm.len() - rank == m + n)
        })()
        .unwrap_or(false);
        t.record(ok, || format!("({m},{n})"));
        let s = VerticalEndomorphism::new(&tm).expect("tangent chart");
        for _ in 0..10 {
            let p = g.parity();
            let comps = (0..tm.len()).map(|a| g.superfunction(&tm, Some(tm.parity(a) + p), 2)).collect();
            let y = SuperVectorField::new(&tm, comps).expect("component count matches");
            let ok = s.apply(&y).and_then(|sy| s.apply(&sy)).map(|ssy| ssy.is_zero()).unwrap_or(false);
            t.record(ok, || format!("({m},{n}) Y = {y}"));
        }
    }
    out.push(t.done());

    let mut t = Tally::new(S, "vertical lifts determine fields");
    let mut detail = Vec::new();
    for (m, n) in dims {
        let (rank, unknowns) = lift_determinacy(m, n).unwrap_or((0, 1));
        detail.push(format!("({m},{n}): rank {rank}/{unknowns}"));
        t.record(rank == unknowns, || detail.join("; "));
    }
    t.detail.get_or_insert(detail.join("; "));
    out.push(t.done());

    let mut t = Tally::new(S, "theta_L is semibasic");
    let tm = make_chart(ChartKind::Tangent, 1, 2);
    for _ in 0..FORMS_CASES / 2 {
        let l = g.superfunction(&tm, Some(Parity::Even), 4);
        let ok = cartan_one_form(&l)
            .map(|th| {
                ["v1", "z1", "z2"].iter().all(|v| {
                    let y = SuperVectorField::partial(&tm, tm.lookup(v).expect("standard name"));
                    th.contract(&y).is_ok_and(|c| c.is_zero())
                })
            })
            .unwrap_or(false);
        t.record(ok, || format!("L = {l}"));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "Hessian criterion agrees with omega_L body rank");
    let mut tally = (0, 0);
    for (m, expected) in family() {
        let ok = regularity(&m.lagrangian)
            .map(|r| {
                if r.is_regular() {
                    tally.0 += 1;
                } else {
                    tally.1 += 1;
                }
                r.criteria_agree() && r.is_regular() == expected
            })
            .unwrap_or(false);
        t.record(ok, || format!("{}: L = {}", m.name, m.lagrangian));
    }
    t.detail.get_or_insert(format!("{} regular, {} degenerate", tally.0, tally.1));
    out.push(t.done());

    let mut t = Tally::new(S, "Gamma_L: i_Gamma omega_L = dE_L, S(Gamma) = Delta, i_Gamma theta_L = Delta(L)");
    for m in regular_models() {
        let ok = dynamics(&m.lagrangian).map(|d| d.verified()).unwrap_or(false);
        t.record(ok, || format!("{}: L = {}", m.name, m.lagrangian));
    }
    out.push(t.done());
    out
}

pub fn legendre_suite(_seed: u64) -> Vec<Check> {
    const S: &str = "legendre";
    let mut out = Vec::new();

    let mut t = Tally::new(S, "FL*(theta_0) = theta_L");
    for m in regular_models() {
        let ok = legendre(&m.lagrangian).and_then(|fl| fl.theta_residual()).map(|r| r.is_zero()).unwrap_or(false);
        t.record(ok, || format!("{}: L = {}", m.name, m.lagrangian));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "FL inverts exactly when L is regular");
    for (m, expected) in family() {
        let ok = legendre(&m.lagrangian).map(|fl| fl.invert().is_ok() == expected).unwrap_or(false);
        t.record(ok, || format!("{}: L = {}", m.name, m.lagrangian));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "Hamiltonian field: i_V omega_0 = dH, FL-related, conjugates to Gamma_L, theta_0(V) = A");
    for m in regular_models() {
        let ok = legendre(&m.lagrangian).and_then(|fl| hamiltonian(&fl)).map(|h| h.verified()).unwrap_or(false);
        t.record(ok, || format!("{}: L = {}", m.name, m.lagrangian));
    }
    out.push(t.done());

    let mut t = Tally::new(S, "harmonic oscillator: H = 1/2 p^2 + 1/2 q^2");
    let ok = (|| -> supermech_core::Result<bool> {
        let hs = hamiltonian(&legendre(&bundled::model("harmonic_oscillator").lagrangian)?)?;
        let cs = hs.v.chart().clone();
        let (q, p) = (SuperFunction::var(&cs, "q1")?, SuperFunction::var(&cs, "p1")?);
        let half = ScalarExpr::from_ratio(1, 2);
        let h = (&(&p * &p) + &(&q * &q)).scale(&half);
        let v = SuperVectorField::from_named(&cs, &[("q1", p.clone()), ("p1", -&q)])?;
        Ok(hs.h == h && hs.v == v && hs.verified())
    })()
    .unwrap_or(false);
    t.record(ok, || "H or V differs from the textbook form".into());
    out.push(t.done());
    out
}

pub fn atlas(_seed: u64) -> Vec<Check> {
    const S: &str = "atlas";
    let mut out = Vec::new();
    for (name, _) in bundled::ATLASES {
        let a = bundled::atlas(name);
        let mut t = Tally::new(S, &format!("atlas {name}: blocks, cocycles, structural samples"));
        match atlas_check(&a) {
            Ok(c) => {
                let worst = c.raw.triples.iter().filter_map(|t| t.structural_max_error).fold(0.0, f64::max);
                t.record(c.passed, || "see `supermech atlas check`".into());
                t.detail.get_or_insert(format!(
                    "{} transitions, {} triples, structural max error {worst:.3e}, tol {STRUCTURAL_TOL:e}",
                    c.raw.transitions.len(),
                    c.raw.triples.len()
                ));
            }
            Err(e) => t.record(false, || e.to_string()),
        }
        out.push(t.done());
    }

    let mut t = Tally::new(S, "body split");
    let shift = bundled::atlas("soul_shift");
    let ok = shift
        .transition("U", "V")
        .and_then(|t| body_split(t).ok())
        .is_some_and(|(a, d)| {
            a == supermech_core::superalgebra::ScalarMatrix::identity(1)
                && d == supermech_core::superalgebra::ScalarMatrix::identity(2)
        });
    t.record(ok, || "soul shift should split as (1, I2)".into());
    let b = make_chart(ChartKind::Base, 1, 1);
    let scale = SuperMorphism::new(
        &b,
        &b,
        vec![SuperFunction::var(&b, "q1").expect("q1").scale_int(2), SuperFunction::var(&b, "th1").expect("th1").scale_int(3)],
    )
    .expect("parity preserving");
    let ok = body_split(&scale).is_ok_and(|(a, d)| {
        a.get(0, 0) == &ScalarExpr::from_int(2) && d.get(0, 0) == &ScalarExpr::from_int(3)
    });
    t.record(ok, || "q' = 2q, th' = 3th should split as (2, 3)".into());
    out.push(t.done());

    let mut t = Tally::new(S, "induced transitions are functorial");
    let mut g = Gen::new(_seed);
    let b = make_chart(ChartKind::Base, 1, 2);
    for _ in 0..20 {
        let (x, y) = (g.morphism(&b), g.morphism(&b));
        let ok = (|| -> supermech_core::Result<bool> {
            Ok(induce_st_transition(&x.compose(&y)?)? == induce_st_transition(&x)?.compose(&induce_st_transition(&y)?)?)
        })();
        match ok {
            Ok(ok) => t.record(ok, || format!("{x:?} , {y:?}")),
            Err(_) => continue,
        }
    }
    out.push(t.done());

    let mut t = Tally::new(S, "Batchelor normalization flag");
    let id = bundled::atlas("identity");
    let ok = id.batchelor && atlas_check(&id).is_ok_and(|c| c.passed);
    t.record(ok, || "identity atlas should pass with the flag".into());
    let ok = atlas_check(&shift).is_ok_and(|c| c.raw.transitions.iter().all(|r| !r.batchelor_normal));
    t.record(ok, || "soul shift has quadratic soul terms".into());
    let mut flagged = shift.clone();
    flagged.batchelor = true;
    let ok = atlas_check(&flagged).is_ok_and(|c| !c.passed);
    t.record(ok, || "soul shift must fail once normalization is requested".into());
    out.push(t.done());
    out
}

pub fn run(suite: &str, seed: u64) -> Option<Vec<Check>> {
    let one = |s: &str| -> Vec<Check> {
        match s {
            "algebra" => algebra(seed),
            "forms" => forms(seed.wrapping_add(1)),
            "cartan" => cartan(seed.wrapping_add(2)),
            "legendre" => legendre_suite(seed.wrapping_add(3)),
            _ => atlas(seed.wrapping_add(4)),
        }
    };
    match suite {
        "all" => Some(SUITES.iter().flat_map(|s| one(s)).collect()),
        s if SUITES.contains(&s) => Some(one(s)),
        _ => None,
    }
}

pub fn report(checks: &[Check], seed: u64) -> Report {
    let mut r = Report::default();
    let mut head = Section::new();
    head.leaf("seed", seed);
    r.push("verify", head);
    for suite in SUITES {
        let mine: Vec<&Check> = checks.iter().filter(|c| c.suite == suite).collect();
        if mine.is_empty() {
            continue;
        }
        let mut s = Section::new();
        for c in mine {
            let mut line = format!("{} ({} cases", if c.passed() { "pass" } else { "FAIL" }, c.cases);
            if c.failures > 0 {
                line.push_str(&format!(", {} failed", c.failures));
            }
            line.push(')');
            if let Some(d) = &c.detail {
                line.push_str(&format!(": {d}"));
            }
            s.leaf(c.name.clone(), line);
        }
        r.push(suite, s);
    }
    let mut s = Section::new();
    let failed = checks.iter().filter(|c| !c.passed()).count();
    s.leaf("checks", checks.len()).leaf("failed", failed);
    r.push("summary", s);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_on_a_fixed_seed() {
        let checks = run("all", 11).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        for s in SUITES {
            assert!(checks.iter().any(|c| c.suite == s));
        }
        assert!(run("bogus", 1).is_none());
    }

    #[test]
    fn report_counts_failures() {
        let c = Check { suite: "forms", name: "x".into(), cases: 3, failures: 1, detail: Some("case 2".into()) };
        let r = report(&[c], 5);
        assert_eq!(r.lookup("summary.failed"), Some("1"));
        assert_eq!(r.lookup("forms.x"), Some("FAIL (3 cases, 1 failed): case 2"));
    }
}
