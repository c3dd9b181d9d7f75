use proptest::prelude::*;

use spinlab_cli::commands::run_cmd;
use spinlab_cli::script::{parse_script, run_script, ErrorKind, Pos};

const SCRIPTS: [&str; 3] = [
    include_str!("../scripts/spin_form.spl"),
    include_str!("../scripts/building_block.spl"),
    include_str!("../scripts/u_family.spl"),
];

fn error(text: &str) -> (ErrorKind, Pos) {
    let e = parse_script(text).unwrap_err();
    (e.kind, e.pos)
}

#[test]
fn form_value_example() {
    let s = parse_script("basis g=5; form q = x*:1 y1:1 y3:1 y5:1; curve a = y3; check q a;").unwrap();
    let out = run_script(&s).unwrap();
    assert_eq!(out.len(), 1);
    assert!(out[0].verdict);
    assert_eq!(out[0].summary, "q(a) = 1");
    assert_eq!(out[0].result["value"], 1);
    assert_eq!(out[0].result["class"], "y3");
}

#[test]
fn empty_input() {
    for text in ["", "  \n", "# only a comment\n"] {
        let s = parse_script(text).unwrap();
        assert!(s.statements.is_empty());
        assert_eq!(s.to_string(), "");
        assert!(run_script(&s).unwrap().is_empty());
    }
}

#[test]
fn out_of_range_index() {
    assert_eq!(
        error("basis g=5;\ncurve z = x9;"),
        (ErrorKind::Dimension, Pos { line: 2, column: 11 })
    );
    assert_eq!(error("basis g=5; form q = y6:1;").0, ErrorKind::Dimension);
    assert_eq!(error("basis g=2; curve c = [1,0,1];").0, ErrorKind::Dimension);
    assert_eq!(error("curve c = x1;").0, ErrorKind::Dimension);
}

#[test]
fn diagnostics_carry_positions() {
    assert_eq!(error("basis g=5;\n  curve a = y3\n"), (ErrorKind::Syntax, Pos { line: 3, column: 1 }));
    assert_eq!(error("basis g=5; check q a;"), (ErrorKind::Undeclared, Pos { line: 1, column: 18 }));
    assert_eq!(
        error("basis g=5;\ncurve a = y3;\ncheck a a;"),
        (ErrorKind::Type, Pos { line: 3, column: 7 })
    );
    assert_eq!(error("basis g=5; frobnicate;"), (ErrorKind::Syntax, Pos { line: 1, column: 12 }));
    assert_eq!(error("basis g=5; curve a = y3 $;").1, Pos { line: 1, column: 25 });
    assert_eq!(error("basis g=5; curve a = y3; curve a = x1;").0, ErrorKind::Syntax);
    assert_eq!(error("basis g=5; curve a = y3; factorization P = a^-1;").0, ErrorKind::Syntax);
    assert_eq!(error("basis g=5; form catalog = chain;").0, ErrorKind::Syntax);
    assert_eq!(error("basis g=5; basis g=3;").0, ErrorKind::Syntax);
    assert_eq!(error("basis g=99999999999999999999999;").0, ErrorKind::Syntax);
}

#[test]
fn canonical_round_trip() {
    for text in SCRIPTS {
        let s = parse_script(text).unwrap();
        let canonical = s.to_string();
        let again = parse_script(&canonical).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.to_string(), canonical);
    }
    let text = "basis g=3 labels=ab;\nform q = a*:1 b2:0;\ncurve c = -2a1+b3 [-2,0,0,0,0,1];\n\
                word w = c^-2 c;\nfactorization P = c^3 power 2;\nconjugate Q = P by w;\n\
                fibersum R = P Q;\nhurwitz H = R at 2 left;\ncheck q c = 0;\ninvariants R signature=meyer;\n";
    let s = parse_script(text).unwrap();
    assert_eq!(s.to_string(), text);
}

#[test]
fn integer_and_sparse_forms() {
    // both forms agree mod 2
    let ok = "basis g=5; form q = chain; curve b = -y3+y4 [0,0,0,0,0,0,0,-1,1,0]; check q b;";
    assert!(run_cmd(ok).unwrap().passes());
    let clash = "basis g=2; curve b = y1 [1,0,0,0];";
    assert_eq!(run_cmd(clash).unwrap_err().code, 3);
    // the integer form alone determines the mod-2 class
    let int_only = "basis g=1; form q = x1:1; curve a = [3,0]; check q a;";
    assert!(run_cmd(int_only).unwrap().passes());
}

#[test]
fn operations_run() {
    let text = "basis g=1;\ncurve a = [1,0];\ncurve b = [0,1];\n\
                factorization E = a b a b a b a b a b a b;\n\
                check-relation E;\ninvariants E;\nh1 E;\nhurwitz F = E at 3 right;\ncheck-relation F;\n";
    let out = run_script(&parse_script(text).unwrap()).unwrap();
    assert_eq!(out.len(), 4);
    assert!(out.iter().all(|o| o.verdict));
    assert_eq!(out[1].result["signature"], -8);
    assert_eq!(out[1].result["euler"], 12);
    assert_eq!(out[2].result["display"], "0");
    // the bred member with one pencil
    let pencil = "basis g=5;\nform q = chain;\nfactorization Z1 = catalog z k=1;\ncheck-spin Z1 q;\ninvariants Z1 signature=bred;\n";
    let out = run_script(&parse_script(pencil).unwrap()).unwrap();
    assert!(out[0].verdict);
    assert_eq!((out[1].result["chi_h"].clone(), out[1].result["c1sq"].clone()), (7.into(), 8.into()));
}

#[test]
fn breeding_in_scripts() {
    use spinlab::constructions::{pencil_images, z_base};
    use spinlab::factorization::boundary_block_positions;
    let at = *boundary_block_positions(&z_base(5).unwrap(), &pencil_images(5).unwrap()).last().unwrap();
    let text = format!(
        "basis g=5; form q = chain; factorization Z = catalog z k=0; breed B = Z at {at};\n\
         check-spin B q; invariants B signature=bred;"
    );
    let out = run_cmd(&text).unwrap();
    assert!(out.passes());
    assert_eq!(out.certificates[1].results["c1sq"], 8);
    let bad = "basis g=5; factorization Z = catalog z k=0; breed B = Z at 1;";
    assert_eq!(run_cmd(bad).unwrap_err().code, 3);
}

#[test]
fn failing_verdicts_are_reported() {
    let out = run_cmd("basis g=3; form q = uniform; factorization P = catalog building-block; check-spin P q;").unwrap();
    assert!(!out.passes());
    let out = run_cmd("basis g=2; form q = x1:1; curve a = x1; check q a = 0;").unwrap();
    assert!(!out.passes());
}

fn statement() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("form q = x*:1 y1:1 y3:1 y5:1".to_string()),
        Just("form r = chain".to_string()),
        (1usize..=7, any::<bool>()).prop_map(|(i, x)| format!("curve c{i} = {}{i}", if x { "x" } else { "y" })),
        Just("check q c1".to_string()),
        Just("word w = c1 c2^-1".to_string()),
        Just("factorization P = c1 c2^2 power 1".to_string()),
        Just("check-relation P".to_string()),
        Just("h1 P".to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn arbitrary_text_never_panics(text in ".{0,80}") {
        let _ = parse_script(&text);
        let _ = run_cmd(&text);
    }

    #[test]
    fn mutated_scripts_never_panic(stmts in prop::collection::vec(statement(), 0..8), cut in 0usize..400, junk in "[ ;=:+*^\\[\\],a-z0-9-]{0,4}") {
        let mut text = String::from("basis g=5;\n");
        for s in &stmts {
            text += s;
            text += ";\n";
        }
        let cut = cut.min(text.len());
        let mutated = format!("{}{}{}", &text[..cut], junk, &text[cut..]);
        if let Ok(s) = parse_script(&mutated) {
            let printed = s.to_string();
            prop_assert_eq!(parse_script(&printed).unwrap().to_string(), printed);
        }
        let _ = run_cmd(&mutated);
    }
}
