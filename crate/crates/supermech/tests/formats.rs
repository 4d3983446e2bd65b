use proptest::prelude::*;
use supermech::atlas_file::parse_atlas;
use supermech::bundled;
use supermech::expr::parse;
use supermech::gen::Gen;
use supermech::model::parse_model;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_expressions_reparse_to_the_same_normal_form(seed in any::<u64>()) {
        let t = Gen::new(seed).tree(&["q1", "v1", "x"], 3);
        if let Ok(n) = t.normalize() {
            let back = parse(&t.to_string()).unwrap().tree.normalize().unwrap();
            prop_assert_eq!(back, n);
        }
    }

    #[test]
    fn family_models_round_trip(i in 0usize..15) {
        let m = bundled::family_model(i);
        prop_assert_eq!(parse_model(&m.to_string()).unwrap(), m);
    }
}

#[test]
fn models_reject_stm_coordinates_and_parity_mixing() {
    let e = parse_model("model \"x\"\neven q1\nodd th1\nlagrangian 1/2*v1^2 + th1\n").unwrap_err();
    assert_eq!(e.line, 4);
    assert!(e.message.contains("mixes"), "{e}");
    let e = parse_model("model \"x\"\neven q1\nodd th1\nlagrangian pz1*v1\n").unwrap_err();
    assert_eq!((e.line, e.column), (4, 12));
}

#[test]
fn atlas_comments_and_unlisted_coordinates() {
    let src = "# two charts\natlas a\nchart U even 1 odd 1\nchart V even 1 odd 1\ntransition U V\n  th1 := 2*th1\nend\n";
    let a = parse_atlas(src).unwrap();
    let t = a.transition("U", "V").unwrap();
    assert_eq!(t.assignment_of("q1").unwrap().to_string(), "q1");
    assert_eq!(t.assignment_of("th1").unwrap().to_string(), "2*th1");
}
