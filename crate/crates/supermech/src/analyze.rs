//! The model pipeline: Cartan forms, regularity, FL, Γ_L and the Hamiltonian
//! side, assembled into a report.

use std::time::Instant;

use supermech_core::charts::ChartKind;
use supermech_core::legendre::{hamiltonian, legendre};
use supermech_core::mechanics::{cartan_one_form, cartan_two_form, dynamics, energy, regularity};
use supermech_core::GradedMatrix;

use crate::model::ModelSpec;
use crate::report::{Report, Section};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub report: Report,
    pub regular: bool,
    pub checks: Vec<(String, Status)>,
}

impl Analysis {
    /// 0 ok, 3 degenerate, 4 a failed identity.
    pub fn exit_code(&self) -> i32 {
        if !self.regular {
            3
        } else if self.checks.iter().any(|(_, s)| *s == Status::Fail) {
            4
        } else {
            0
        }
    }
}

fn matrix_text(m: &GradedMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn target_label(kind: ChartKind) -> &'static str {
    match kind {
        ChartKind::Cotangent => "T*M (q, p, th, eta)",
        ChartKind::OddSector => "odd sector (q, peta, th, pp)",
        _ => kind.name(),
    }
}

struct Clock {
    on: bool,
    last: Instant,
    laps: Section,
}

impl Clock {
    fn lap(&mut self, stage: &str) {
        if self.on {
            let now = Instant::now();
            self.laps.leaf(stage, format!("{:.3} ms", (now - self.last).as_secs_f64() * 1e3));
            self.last = now;
        }
    }
}

/// Runs the full pipeline. Never fails on a degenerate Lagrangian: the
/// reasons go into the report. Timing is included only when asked for, so
/// that reports are otherwise byte-for-byte reproducible.
pub fn analyze(model: &ModelSpec, timing: bool) -> Analysis {
    let mut clock = Clock {
        on: timing,
        last: Instant::now(),
        laps: Section::new(),
    };
    let l = &model.lagrangian;
    let tm = model.chart();
    let (m, n) = model.dims();
    let mut report = Report::default();
    let mut checks: Vec<(String, Status)> = Vec::new();

    let mut s = Section::new();
    s.leaf("name", &model.name)
        .leaf("type", format!("({m}|{n})"))
        .leaf("parity", model.parity())
        .leaf("coordinates", tm.coords().iter().map(|c| c.name.to_string()).collect::<Vec<_>>().join(" "))
        .leaf("lagrangian", l);
    report.push("model", s);

    let mut s = Section::new();
    match (cartan_one_form(l), cartan_two_form(l), energy(l)) {
        (Ok(th), Ok(om), Ok(e)) => {
            s.leaf("theta_L", th).leaf("omega_L", om).leaf("E_L", e);
        }
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
            s.leaf("error", e);
        }
    }
    report.push("cartan", s);
    clock.lap("cartan");

    let mut s = Section::new();
    let reg = regularity(l);
    let regular = match &reg {
        Ok(r) => {
            for b in &r.blocks {
                let mut bs = Section::new();
                bs.leaf("order", &b.order)
                    .leaf("matrix", matrix_text(&b.matrix))
                    .leaf("body", if b.invertible { "invertible" } else { "singular" });
                s.branch(b.label.clone(), bs);
            }
            s.leaf("hessian_criterion", if r.criterion_regular { "regular" } else { "degenerate" })
                .leaf("omega_body_rank", format!("{}/{}", r.omega_rank, r.omega_dim))
                .leaf("verdict", if r.is_regular() { "regular" } else { "degenerate" });
            if !r.reasons.is_empty() {
                let mut rs = Section::new();
                for (i, why) in r.reasons.iter().enumerate() {
                    rs.leaf(format!("{}", i + 1), why);
                }
                s.branch("reasons", rs);
            }
            checks.push(("hessian criterion agrees with omega_L rank".into(), Status::of(r.criteria_agree())));
            r.is_regular()
        }
        Err(e) => {
            s.leaf("verdict", "degenerate").leaf("error", e);
            false
        }
    };
    report.push("regularity", s);
    clock.lap("regularity");

    let mut s = Section::new();
    let fl = legendre(l);
    match &fl {
        Ok(fl) => {
            s.leaf("target", target_label(fl.target().kind()));
            for (name, f) in fl.momenta() {
                s.leaf(name, f);
            }
            let ok = fl.theta_residual().map(|r| r.is_zero()).unwrap_or(false);
            checks.push(("FL*(theta_0) = theta_L".into(), Status::of(ok)));
        }
        Err(e) => {
            s.leaf("error", e);
            checks.push(("FL*(theta_0) = theta_L".into(), Status::Fail));
        }
    }
    report.push("momenta", s);
    clock.lap("legendre");

    let dyn_names = ["i_Gamma omega_L = dE_L", "S(Gamma) = Delta", "i_Gamma theta_L = Delta(L)"];
    let mut s = Section::new();
    if regular {
        match dynamics(l) {
            Ok(d) => {
                for a in 0..tm.len() {
                    s.leaf(format!("d/dt {}", tm.name(a)), d.gamma.component(a));
                }
                checks.push((dyn_names[0].into(), Status::of(d.symplectic_residual.is_zero())));
                checks.push((dyn_names[1].into(), Status::of(d.sode_residual.is_zero())));
                checks.push((dyn_names[2].into(), Status::of(d.action_residual.is_zero())));
            }
            Err(e) => {
                s.leaf("error", e);
                checks.extend(dyn_names.iter().map(|n| (n.to_string(), Status::Fail)));
            }
        }
    } else {
        s.leaf("status", "unavailable: the Lagrangian is degenerate");
        checks.extend(dyn_names.iter().map(|n| (n.to_string(), Status::Skipped)));
    }
    report.push("euler_lagrange", s);
    clock.lap("dynamics");

    let ham_names = [
        "i_V omega_0 = dH",
        "Gamma_L and V are FL-related",
        "FL* V (FL^-1)* = Gamma_L",
        "theta_0(V) = (FL^-1)*(Delta L)",
    ];
    let mut s = Section::new();
    match (&fl, regular) {
        (Ok(fl), true) => match hamiltonian(fl) {
            Ok(hs) => {
                s.leaf("H", &hs.h);
                let mut inv = Section::new();
                let tgt = hs.inverse.target();
                for (i, f) in hs.inverse.assignments().iter().enumerate() {
                    if !tgt.coord(i).role.is_base() {
                        inv.leaf(tgt.name(i), f);
                    }
                }
                s.branch("inverse", inv);
                let mut eqs = Section::new();
                for e in hs.equations() {
                    eqs.leaf(format!("d/dt {}", e.coordinate), e.rhs);
                }
                s.branch("equations", eqs);
                checks.push((ham_names[0].into(), Status::of(hs.hamilton_residual.is_zero())));
                checks.push((ham_names[1].into(), Status::of(hs.related_residual.iter().all(|f| f.is_zero()))));
                checks.push((ham_names[2].into(), Status::of(hs.conjugation_residual.iter().all(|f| f.is_zero()))));
                checks.push((ham_names[3].into(), Status::of(hs.action_residual.is_zero())));
            }
            Err(e) => {
                s.leaf("status", format!("unavailable: {e}"));
                checks.extend(ham_names.iter().map(|n| (n.to_string(), Status::Skipped)));
            }
        },
        _ => {
            s.leaf("status", "unavailable: FL is not a local diffeomorphism");
            checks.extend(ham_names.iter().map(|n| (n.to_string(), Status::Skipped)));
        }
    }
    report.push("hamiltonian", s);
    clock.lap("hamiltonian");

    let mut s = Section::new();
    for (name, st) in &checks {
        s.leaf(name.clone(), st.label());
    }
    report.push("checks", s);
    if timing {
        report.push("timing", std::mem::take(&mut clock.laps));
    }
    Analysis {
        report,
        regular,
        checks,
    }
}
