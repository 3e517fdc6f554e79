use std::path::PathBuf;

use serde_json::Value;

use segal_core::poset::FinPoset;
use segal_core::segal::{check_1segal, check_2segal_dk, check_2segal_gkt};
use segal_core::sset::nerve_poset;
use segal_forge::cli::run;
use segal_forge::json::{parse, SSetDoc};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn forge(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("segal-forge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("segal-forge-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn simplex_level_sizes() {
    let (code, out, _) = forge(&["simplex", "--n", "2", "--dim", "3", "--emit", "summary"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("level sizes: 3, 6, 10, 15\n"), "{out}");
}

#[test]
fn simplex_document_carries_its_manifest() {
    let (code, out, _) = forge(&["simplex", "--n", "1", "--dim", "2"]);
    assert_eq!(code, 0);
    let doc: SSetDoc = parse(&out).unwrap();
    let m = doc.manifest.clone().unwrap();
    assert_eq!((m.command.as_str(), m.bounds["n"].as_u64()), ("simplex", Some(1)));
    assert_eq!(doc.to_sset().unwrap().sizes(), [2, 3, 4]);
}

#[test]
fn nerve_of_a_poset_file() {
    let (code, out, _) = forge(&["nerve", &fixture("diamond.json"), "--dim", "3"]);
    assert_eq!(code, 0);
    let x = parse::<SSetDoc>(&out).unwrap().to_sset().unwrap();
    assert_eq!(x.nondegenerate_counts(), [4, 5, 2, 0]);
    let chain = forge(&["nerve", &fixture("chain3.json"), "--dim", "3"]).1;
    assert_eq!(parse::<SSetDoc>(&chain).unwrap().to_sset().unwrap(), nerve_poset(&FinPoset::chain(3), 3));
}

#[test]
fn glue_matches_the_stored_broken_fixture() {
    let (code, out, _) = forge(&["glue", "--simplex", "2", "--simplex", "2", "--identify", "0:0,2=1:0,1", "--dim", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(fixture("broken.json")).unwrap());
}

#[test]
fn check2segal_on_fixtures() {
    let (code, out, _) = forge(&["check2segal", &fixture("broken.json"), "--max-dim", "4", "--form", "both"]);
    assert_eq!(code, 1);
    let r = json(&out);
    assert_eq!(r["passed"], false);
    assert_eq!(r["result"]["forms_agree"], true);
    let (code, _, _) = forge(&["check2segal", &fixture("two_segal_not_one_segal.json"), "--form", "both", "--exhaustive"]);
    assert_eq!(code, 0);
    let (code, _, _) = forge(&["check2segal", &fixture("two_segal_not_one_segal.json"), "--form", "1segal"]);
    assert_eq!(code, 1);
}

#[test]
fn assoc_check_reports_the_witness_chain() {
    let (code, out, _) = forge(&["assoc-check", &fixture("broken.json"), &fixture("chain.json")]);
    assert_eq!(code, 1);
    let r = json(&out);
    let w = &r["result"]["witness"];
    assert_eq!(w["bijective"], false);
    assert_eq!(w["chain"]["kind"], "chain");
    assert_eq!((w["domain"].as_u64(), w["codomain"].as_u64()), (Some(25), Some(26)));
    // A nerve is 2-Segal, so the same chain passes.
    let nerve = forge(&["nerve", &fixture("chain3.json"), "--dim", "3"]).1;
    let path = temp("nerve3.json", &nerve);
    assert_eq!(forge(&["assoc-check", path.to_str().unwrap(), &fixture("chain.json")]).0, 0);
}

#[test]
fn assoc_check_without_a_chain_searches() {
    let (code, out, _) = forge(&["assoc-check", &fixture("broken.json"), "--max-fiber", "3", "--max-chain", "2"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["result"]["witness"]["bijective"], false);
}

#[test]
fn two_segal_fixture_is_reproduced_by_the_search() {
    let stored = std::fs::read_to_string(fixture("two_segal_not_one_segal.json")).unwrap();
    let doc: SSetDoc = parse(&stored).unwrap();
    let m = doc.manifest.clone().unwrap();
    let seed = m.seed.unwrap().to_string();
    let attempts = m.bounds["attempts"].to_string();
    let (code, out, _) = forge(&["search-fixture", "--seed", &seed, "--attempts", &attempts]);
    assert_eq!(code, 0);
    assert_eq!(out, stored);
    let x = doc.to_sset().unwrap();
    assert!(check_2segal_dk(&x, 4, true).unwrap().passed);
    assert!(check_2segal_gkt(&x, 4).unwrap().passed);
    assert!(!check_1segal(&x, 4).unwrap().passed);
    assert!(x.nondegenerate_counts()[2] > 0);
}

#[test]
fn alpha_json_and_dot() {
    let (code, out, _) = forge(&["alpha", &fixture("chain.json"), "--phi", "[[0,2]]"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["result"]["pyramid"]["[0;2]"], serde_json::json!([4, 6, 4, 1]));
    assert_eq!(r["result"]["face_degeneracy_actions"].as_array().unwrap().len(), 4);
    let (code, dot, _) = forge(&["alpha", &fixture("chain.json"), "--emit", "dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("// manifest: "));
    assert_eq!(dot.matches("style=dashed").count(), 6);
    assert!(dot.contains("\"[0;2]\" [label=\"[0;2]\\n4,6,4,1\"]"));
}

#[test]
fn hall_operations() {
    let d2 = temp("d2.json", &forge(&["simplex", "--n", "2", "--dim", "2"]).1);
    let d2 = d2.to_str().unwrap();
    let zeta = fixture("zeta.json");
    let r = json(&forge(&["hall", d2, "--op", "convolve", "--f", &zeta, "--g", &zeta]).1);
    assert_eq!(r["result"]["value"]["0,2"], "3/1");
    let r = json(&forge(&["hall", d2, "--op", "mobius"]).1);
    assert_eq!(r["result"]["value"]["0,1"], "-1/1");
    assert!(r["result"]["value"].get("0,2").is_none());
    let r = json(&forge(&["hall", d2, "--op", "comult", "--f", &zeta]).1);
    assert_eq!(r["result"]["value"]["0,1|1,2"], "1/1");
    assert_eq!(forge(&["hall", d2, "--op", "convolve", "--f", &zeta]).0, 2);
}

#[test]
fn export_dot_for_posets_and_categories() {
    let (code, dot, _) = forge(&["export-dot", &fixture("diamond.json")]);
    assert_eq!(code, 0);
    assert_eq!(dot.matches("->").count(), 4);
    let (code, dot, _) = forge(&["export-dot", &fixture("walking_idempotent.json")]);
    assert_eq!(code, 0);
    assert!(dot.contains("\"x\" -> \"x\" [label=\"e\"]"));
}

#[test]
fn input_errors_exit_with_two_and_a_json_path() {
    let bad = temp("bad.json", r#"{"format":"segal-forge/1","kind":"sset","dim":1,"levels":[["a"],["b"]],"faces":{"1,0":{"b":3}}}"#);
    let (code, out, err) = forge(&["check2segal", bad.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.contains("$.faces.1,0.b"), "{err}");
    let wrong = temp("wrong.json", r#"{"format":"segal-forge/0","kind":"sset","dim":0,"levels":[["a"]],"faces":{},"degens":{}}"#);
    let (code, _, err) = forge(&["check2segal", wrong.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("segal-forge/1"));
    assert_eq!(forge(&["check2segal", "/does/not/exist.json"]).0, 2);
    assert_eq!(forge(&["simplex", "--n", "4", "--dim", "2"]).0, 2);
    assert_eq!(forge(&["no-such-command"]).0, 2);
}

#[test]
fn reports_are_reproducible() {
    let a = forge(&["self-test", "--seed", "3"]);
    let b = forge(&["self-test", "--seed", "3"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a, b);
    let r = json(&a.1);
    assert_eq!(r["manifest"]["seed"], 3);
    assert_eq!(r["manifest"]["command"], "self-test");
}
