use std::io::Write;
use std::process::{Command, Stdio};

use descent_cli::emit::{fixture, FIXTURES};
use descent_cli::{build, run, Document, Input, Options, Verdict, COMMANDS};
use descent_core::hopf::HopfAlgebroid;
use descent_core::{fixtures, Limits};
use serde_json::{json, Value};

fn opts() -> Options {
    Options::default()
}

fn fixture_text(name: &str) -> String {
    fixture(name, 3, &Limits::default()).unwrap().emit()
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

#[test]
fn parse_of_emit_is_the_identity_on_fixtures() {
    let limits = Limits::default();
    for p in [3, 5] {
        for name in FIXTURES {
            let doc = fixture(name, p, &limits).unwrap();
            let text = doc.emit();
            let parsed = Document::parse(&text).unwrap();
            assert_eq!(parsed, doc, "{name}");
            assert_eq!(parsed.emit(), text, "{name}");
        }
    }
}

#[test]
fn fixture_documents_rebuild_the_bundled_sites() {
    let limits = Limits::default();
    for (name, site) in [("S2", fixtures::s2()), ("CIRC", fixtures::circ())] {
        let doc = fixture(name, 3, &limits).unwrap();
        let built = build::site(&doc, &limits).unwrap();
        assert!(built.cat().structurally_eq(site.cat()), "{name}");
        assert_eq!(built.basis(), site.basis(), "{name}");
        assert_eq!(built.pullback_table(), site.pullback_table(), "{name}");
    }
    let doc = fixture("BG2", 3, &limits).unwrap();
    let g = build::groupoid_object(&doc, &limits).unwrap();
    let expected = fixtures::bg2_groupoid();
    assert!(g.site.cat().structurally_eq(expected.site.cat()));
    assert_eq!(
        (g.x0, g.x1, g.d, g.r, g.i, g.mu, g.inv),
        (
            expected.x0,
            expected.x1,
            expected.d,
            expected.r,
            expected.i,
            expected.mu,
            expected.inv
        )
    );
    let doc = fixture("HOPF-EPS", 5, &limits).unwrap();
    let h = build::hopf(&doc).unwrap();
    let raw = HopfAlgebroid::hopf_eps_raw(5);
    assert_eq!(h.raw.delta, raw.delta);
    assert_eq!(h.raw.conjugation, raw.conjugation);
    assert!(h.gamma.module.is_isomorphic(&raw.gamma.module));
}

#[test]
fn is_stack_on_circ_reports_the_mobius_datum() {
    let out = run("is-stack", Input::Fixture("CIRC"), &opts());
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.report.verdict, Verdict::Fail);
    let w = &out.report.witness;
    assert_eq!(w["cover"], json!("{A<=X, B<=X, C<=X} → X"));
    let datum = w["descent_datum_without_preimage"].as_str().unwrap();
    // exactly one overlap carries the non-trivial element
    assert!(datum.contains("g1"), "{datum}");
    let s2 = run("is-stack", Input::Fixture("S2"), &opts());
    assert_eq!((s2.exit_code, s2.report.verdict), (0, Verdict::Pass));
}

#[test]
fn counterexample_report_lists_the_maps_and_the_failed_search() {
    for p in [2, 3, 5] {
        let o = Options { p, ..opts() };
        let out = run("counterexample-nonabelian", Input::None, &o);
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.report.verdict, Verdict::Pass);
        let w = &out.report.witness;
        for key in ["i", "i_prime", "r", "cokernel_of_i", "cokernel_of_i_prime"] {
            assert!(w[key].is_object(), "{key}");
        }
        assert_eq!(w["i"]["matrix"], json!([[p]]));
        assert_eq!(w["i_prime"]["domain"]["group"], json!(format!("Z/{p}")));
        assert_eq!(w["i"]["codomain"]["group"], json!(format!("Z/{}", p * p)));
        let search = &w["isomorphism_search"];
        assert_eq!(search["isomorphism_found"], json!(false));
        assert_eq!(
            search["rejected_units"].as_array().unwrap().len() as i64,
            p - 1
        );
    }
}

#[test]
fn truncated_document_exits_with_a_parse_diagnostic() {
    let text = fixture_text("CIRC");
    let out = run("is-stack", Input::Text(&text[..text.len() / 2]), &opts());
    assert_eq!(out.exit_code, 2);
    assert_eq!(out.report.verdict, Verdict::Error);
    assert_eq!(out.report.witness["kind"], json!("parse"));
    assert!(out.report.witness["message"]
        .as_str()
        .unwrap()
        .contains("line"));
}

#[test]
fn schema_violations_name_the_field() {
    let mut doc: Value = serde_json::from_str(&fixture_text("S2")).unwrap();
    doc["site"]["covers"][0]["legs"][0] = json!("nope");
    let out = run("is-sheaf", Input::Text(&doc.to_string()), &opts());
    assert_eq!(out.exit_code, 2);
    assert_eq!(out.report.witness["kind"], json!("schema"));
    assert!(out.report.witness["message"]
        .as_str()
        .unwrap()
        .contains("site.covers[0]"));

    let mut doc: Value = serde_json::from_str(&fixture_text("S2")).unwrap();
    doc["site"]["covers"][1]["extra"] = json!(1);
    let out = run("is-sheaf", Input::Text(&doc.to_string()), &opts());
    assert_eq!(out.exit_code, 2);
    let msg = out.report.witness["message"].as_str().unwrap().to_string();
    assert!(msg.contains("site.covers[1].extra"), "{msg}");

    let out = run("is-stack", Input::Text("{}"), &opts());
    assert_eq!(out.exit_code, 2);
    assert!(out.report.witness["message"]
        .as_str()
        .unwrap()
        .contains("category"));
}

/// `(Z/3, m ⊗ ε)` breaks the counit law.
fn bad_comodule_document() -> String {
    let mut doc: Value = serde_json::from_str(&fixture_text("HOPF-EPS")).unwrap();
    doc["comodule"]["coaction"] = json!([[0], [1]]);
    doc.as_object_mut().unwrap().remove("module_map");
    doc.to_string()
}

#[test]
fn failed_laws_are_verdicts_for_checks_and_errors_for_conversions() {
    let text = bad_comodule_document();
    for cmd in ["validate", "comodule-check"] {
        let out = run(cmd, Input::Text(&text), &opts());
        assert_eq!(out.exit_code, 0, "{cmd}");
        assert_eq!(out.report.verdict, Verdict::Fail, "{cmd}");
    }
    let out = run("comodule-descent-roundtrip", Input::Text(&text), &opts());
    assert_eq!(out.exit_code, 2);
    assert_eq!(out.report.witness["kind"], json!("invalid_input"));
}

#[test]
fn integers_may_be_strings_beyond_sixty_four_bits() {
    let mut doc: Value = serde_json::from_str(&fixture_text("HOPF-EPS")).unwrap();
    let big = "340282366920938463463374607431768211456";
    doc["comodule"]["module"]["relations"] = json!([[big]]);
    doc.as_object_mut().unwrap().remove("module_map");
    let out = run("comodule-check", Input::Text(&doc.to_string()), &opts());
    // Z/2^128 with ψ = 1 + ε is not a comodule: pε must vanish on M
    assert_eq!(out.exit_code, 0);
    let parsed = Document::parse(&doc.to_string()).unwrap();
    assert!(parsed.emit().contains(big));
}

const EXPLICIT_MAP: &str = r#"{
  "category": {"poset": {"elements": ["X", "U"], "leq": [["U", "X"]]}},
  "site": {"covers": [{"target": "X", "legs": ["U<=X"]}, {"target": "U", "legs": ["id_U"]}]},
  "presheaf_grpd": {
    "values": {
      "X": {"objects": ["a", "b"], "morphisms": [
              {"name": "1a", "src": "a", "tgt": "a"}, {"name": "1b", "src": "b", "tgt": "b"},
              {"name": "s", "src": "a", "tgt": "b"}, {"name": "t", "src": "b", "tgt": "a"}],
            "identities": {"a": "1a", "b": "1b"},
            "compose": [["t", "s", "1a"], ["s", "t", "1b"]]},
      "U": {"finite_sets": [{"name": "o", "size": 1}]}
    },
    "restrict": {"U<=X": {"objects": {"a": "o", "b": "o"},
                          "morphisms": {"s": "o->o[0]", "t": "o->o[0]"}}}
  },
  "map": {"to_terminal": true}
}"#;

#[test]
fn explicit_presheaves_of_groupoids_and_maps() {
    let out = run("validate", Input::Text(EXPLICIT_MAP), &opts());
    assert_eq!(out.report.verdict, Verdict::Pass, "{}", out.report.human());
    let out = run("is-fibration", Input::Text(EXPLICIT_MAP), &opts());
    assert_eq!((out.exit_code, out.report.verdict), (0, Verdict::Pass));
    let out = run("is-local-we", Input::Text(EXPLICIT_MAP), &opts());
    assert_eq!(out.exit_code, 0);
    // `a ≅ b` over X, and U has one object: a local equivalence to the point
    assert_eq!(out.report.verdict, Verdict::Pass);

    let mut doc: Value = serde_json::from_str(EXPLICIT_MAP).unwrap();
    doc["presheaf_grpd"]["restrict"]["U<=X"]["objects"]["b"] = json!("missing");
    let out = run("is-fibration", Input::Text(&doc.to_string()), &opts());
    assert_eq!(out.exit_code, 2);
}

#[test]
fn cech_cohomology_of_the_circle() {
    let out = run("cech-cohomology", Input::Fixture("CIRC"), &opts());
    assert_eq!(out.exit_code, 0);
    let groups: Vec<String> = out.report.witness["covers"][0]["cohomology"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["group"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(groups, ["Z", "Z", "0"]);
}

const Z_TO_Z3: &str = r#"{
  "ring_map": {
    "domain": {"module": {"base": "Z", "generators": 1}, "unit": [1], "table": [[[1]]]},
    "codomain": {"module": {"base": "Z", "generators": 1, "relations": [[3]]},
                 "unit": [1], "table": [[[1]]]},
    "matrix": [[1]]
  }
}"#;

#[test]
fn amitsur_check_on_a_non_faithfully_flat_map() {
    let out = run("amitsur-check", Input::Text(Z_TO_Z3), &opts());
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.report.verdict, Verdict::Fail);
    assert_eq!(out.report.witness["injective"], json!(false));
    let out = run("amitsur-check", Input::Fixture("HOPF-EPS"), &opts());
    assert_eq!(out.report.verdict, Verdict::Pass);
}

/// Every command on a fixture it applies to.
fn command_fixture(cmd: &str) -> Option<&'static str> {
    Some(match cmd {
        "descent-roundtrip" | "holim-crosscheck" => "BG2",
        "comodule-check" | "comodule-descent-roundtrip" | "comodule-cokernel" | "amitsur-check" => {
            "HOPF-EPS"
        }
        "counterexample-nonabelian" => return None,
        _ => "CIRC",
    })
}

#[test]
fn machine_reports_are_deterministic_and_match_the_published_schema() {
    let v = schema();
    for cmd in COMMANDS {
        let o = Options { bound: 2, ..opts() };
        let input = command_fixture(cmd).map_or(Input::None, Input::Fixture);
        let first = run(cmd, input, &o);
        assert_eq!(first.exit_code, 0, "{cmd}: {}", first.report.human());
        let text = first.report.machine();
        assert_eq!(text, run(cmd, input, &o).report.machine(), "{cmd}");
        let value: Value = serde_json::from_str(&text).unwrap();
        assert!(value.get("timing_ms").is_none());
        assert!(v.is_valid(&value), "{cmd}: {text}");
    }
    let err = run("is-stack", Input::Text("{"), &opts());
    let value: Value = serde_json::from_str(&err.report.machine()).unwrap();
    assert!(v.is_valid(&value));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_descent");
    let out = Command::new(bin)
        .args(["fixtures", "--fixture", "S2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    Document::parse(&text).unwrap();

    let mut child = Command::new(bin)
        .args(["is-sheaf", "-", "--machine"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(&text.as_bytes()[..text.len() / 3])
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["witness"]["kind"], json!("parse"));

    let out = Command::new(bin)
        .args(["is-stack", "--fixture", "CIRC", "--machine"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], json!("fail"));
}
