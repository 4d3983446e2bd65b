//! `atlas check`: transition blocks, induced tangent-superbundle cocycles
//! and sampled structural cocycles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supermech_core::charts::{Atlas, AtlasReport, ChartKind};
use supermech_core::superalgebra::ScalarMatrix;
use supermech_core::Result;

use crate::report::{Report, Section};

/// Entry-wise tolerance for the sampled structural cocycle.
pub const STRUCTURAL_TOL: f64 = 1e-9;
pub const SAMPLE_POINTS: usize = 10;
const SAMPLE_SEED: u64 = 0x5eed;

/// Body points for the even coordinates of the tangent-super chart, drawn
/// from [-1, 1] with a fixed seed.
pub fn sample_points(atlas: &Atlas, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let (m, n) = atlas.dims();
    let st = supermech_core::charts::make_chart(ChartKind::TangentSuper, m, n);
    let evens = st.coords().iter().filter(|c| !c.parity.is_odd()).count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..evens).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect()
}

fn matrix_text(m: &ScalarMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn yes(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

pub struct AtlasCheck {
    pub report: Report,
    pub raw: AtlasReport,
    pub passed: bool,
}

pub fn atlas_check(atlas: &Atlas) -> Result<AtlasCheck> {
    let raw = atlas.check(&sample_points(atlas, SAMPLE_POINTS, SAMPLE_SEED))?;
    let passed = raw.passed(STRUCTURAL_TOL);
    let (m, n) = atlas.dims();
    let mut report = Report::default();
    let mut s = Section::new();
    s.leaf("name", &atlas.name)
        .leaf("type", format!("({m}|{n})"))
        .leaf("charts", atlas.charts().join(" "))
        .leaf("batchelor", if atlas.batchelor { "requested" } else { "not requested" });
    report.push("atlas", s);
    for ((to, from), t) in atlas.transitions() {
        let tr = raw
            .transitions
            .iter()
            .find(|r| &r.to == to && &r.from == from)
            .expect("one report per transition");
        let mut s = Section::new();
        let cs = t.target();
        for i in 0..cs.len() {
            s.leaf(cs.name(i), t.assignment(i));
        }
        s.leaf("A~ (body dq'/dq)", matrix_text(&tr.a_tilde))
            .leaf("D~ (body dth'/dth)", matrix_text(&tr.d_tilde))
            .leaf("body blocks invertible", yes(tr.invertible))
            .leaf("structural matrix matches Jacobian route", yes(tr.structural_routes_agree))
            .leaf("batchelor normal", if tr.batchelor_normal { "yes" } else { "no" });
        report.push(format!("transition {to} <- {from}"), s);
    }
    for t in &raw.triples {
        let mut s = Section::new();
        s.leaf("base cocycle", yes(t.base_cocycle)).leaf("induced ST cocycle", yes(t.st_cocycle));
        match t.structural_max_error {
            Some(e) => s.leaf(
                "structural cocycle",
                format!("{} (max error {e:.3e} over {} points, tol {STRUCTURAL_TOL:e})", yes(e <= STRUCTURAL_TOL), t.samples),
            ),
            None => s.leaf("structural cocycle", "not sampled"),
        };
        report.push(format!("cocycle {} {} {}", t.charts[0], t.charts[1], t.charts[2]), s);
    }
    let mut s = Section::new();
    s.leaf("result", yes(passed));
    report.push("verdict", s);
    Ok(AtlasCheck { report, raw, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn samples_are_reproducible_and_bounded() {
        let a = bundled::atlas("three_chart");
        let p = sample_points(&a, 4, 1);
        assert_eq!(p, sample_points(&a, 4, 1));
        assert!(p.iter().flatten().all(|x| (-1.0..=1.0).contains(x)));
    }

    #[test]
    fn soul_shift_report() {
        let c = atlas_check(&bundled::atlas("soul_shift")).unwrap();
        assert!(c.passed);
        assert_eq!(c.report.lookup("transition U <- V.A~ (body dq'/dq)"), Some("[[1]]"));
        assert_eq!(c.report.lookup("transition U <- V.batchelor normal"), Some("no"));
    }
}
