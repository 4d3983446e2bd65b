//! Models and atlases shipped with the binary.

use supermech_core::charts::Atlas;

use crate::atlas_file::parse_atlas;
use crate::model::{parse_model, ModelSpec};

pub const MODELS: &[(&str, &str)] = &[
    ("free_superparticle", include_str!("../data/models/free_superparticle.model")),
    ("harmonic_oscillator", include_str!("../data/models/harmonic_oscillator.model")),
    ("superoscillator", include_str!("../data/models/superoscillator.model")),
    ("odd_model", include_str!("../data/models/odd_model.model")),
    ("degenerate", include_str!("../data/models/degenerate.model")),
];

pub const ATLASES: &[(&str, &str)] = &[
    ("identity", include_str!("../data/atlases/identity.atlas")),
    ("soul_shift", include_str!("../data/atlases/soul_shift.atlas")),
    ("three_chart", include_str!("../data/atlases/three_chart.atlas")),
];

/// Bundled models whose Lagrangian is regular.
pub const REGULAR_MODELS: &[&str] = &["free_superparticle", "harmonic_oscillator", "superoscillator", "odd_model"];

pub fn source(name: &str) -> Option<&'static str> {
    MODELS.iter().chain(ATLASES).find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn model(name: &str) -> ModelSpec {
    let src = MODELS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).expect("bundled model name");
    parse_model(src).expect("bundled models parse")
}

pub fn atlas(name: &str) -> Atlas {
    let src = ATLASES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).expect("bundled atlas name");
    parse_atlas(src).expect("bundled atlases parse")
}

/// Lagrangians for the regularity study: (even names, odd names, L,
/// expected regular).
pub const REGULARITY_FAMILY: &[(&str, &str, &str, bool)] = &[
    ("q1", "th1 th2", "1/2*v1^2 + 1/2*z1*z2", true),
    ("q1", "", "1/2*v1^2 - 1/2*q1^2", true),
    ("q1", "th1 th2", "1/2*v1^2 - 1/2*q1^2 + 1/2*z1*z2 - 1/2*th1*th2", true),
    ("q1", "th1", "v1*z1", true),
    ("q1 q2", "", "1/2*v1^2 + 1/2*v2^2 - q1*q2", true),
    ("q1 q2", "th1 th2", "1/2*v1^2 + v1*v2 + v2^2 + 1/2*z1*z2", true),
    ("q1", "th1 th2", "1/2*v1^2 + 1/2*z1*z2 + q1*th1*th2", true),
    ("q1 q2", "th1 th2", "v1*z1 + v2*z2 + q1*th2", true),
    ("q1", "", "1/2*(1 + q1^2)*v1^2", true),
    ("q1", "", "1/2*v1^2 + cos(q1)", true),
    ("q1", "th1", "1/2*v1^2", false),
    ("q1 q2", "th1", "v1*z1", false),
    ("q1 q2", "", "1/2*v1^2", false),
    ("q1 q2", "", "1/2*(v1 + v2)^2", false),
    ("q1", "th1", "1/2*v1^2 + th1*z1", false),
];

pub fn family_model(i: usize) -> ModelSpec {
    let (even, odd, l, _) = REGULARITY_FAMILY[i];
    let src = format!("model \"family {}\"\neven {even}\nodd {odd}\nlagrangian {l}\n", i + 1);
    parse_model(&src).expect("family models parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn everything_bundled_parses_and_round_trips() {
        for (name, _) in MODELS {
            let m = model(name);
            assert_eq!(parse_model(&m.to_string()).unwrap(), m, "{name}");
        }
        for (name, _) in ATLASES {
            atlas(name);
        }
        for i in 0..REGULARITY_FAMILY.len() {
            family_model(i);
        }
        assert_eq!(REGULARITY_FAMILY.iter().filter(|f| f.3).count(), 10);
        assert!(source("three_chart").is_some() && source("nope").is_none());
    }
}
