use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn graphs(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs").join(name)
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn mshopf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mshopf")).args(args).output().expect("binary runs")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn diagnostic(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is json")
}

#[test]
fn primitive_bubble_has_two_terms() {
    let o = mshopf(&["coproduct", graphs("bubble.graph").to_str().unwrap(), "--rho", "2"]);
    assert!(o.status.success());
    let v = json_out(&o);
    assert_eq!(v[0]["terms"], 2);
    assert_eq!(v[0]["coproduct"].as_array().unwrap().len(), 2);
}

#[test]
fn sunset_pi_ck_report() {
    let o = mshopf(&["morphism", "--pi-ck", graphs("sunset.graph").to_str().unwrap(), "--rho", "2"]);
    assert!(o.status.success());
    let v = json_out(&o);
    assert_eq!(v[0]["coefficients"], serde_json::json!([6, 3, 3, 1]));
    assert_eq!(v[0]["total"]["num"], "27");
    assert_eq!(v[0]["morphism"], true);
}

#[test]
fn chain_has_a_nontrivial_coproduct_term() {
    let o = mshopf(&["coproduct", graphs("chain.graph").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json_out(&o)[0]["terms"], 3);
    let all = mshopf(&["coproduct", "--all-divergent", graphs("chain.graph").to_str().unwrap()]);
    assert_eq!(json_out(&all)[0]["terms"], 4);
}

#[test]
fn antipode_agrees_with_forests() {
    let o = mshopf(&["antipode", graphs("eye.graph").to_str().unwrap(), graphs("chain.graph").to_str().unwrap()]);
    assert!(o.status.success());
    for row in json_out(&o).as_array().unwrap() {
        assert_eq!(row["forest_formula_agrees"], true);
    }
}

#[test]
fn forests_of_the_chain() {
    let o = mshopf(&["forests", graphs("chain.graph").to_str().unwrap()]);
    assert_eq!(json_out(&o)[0]["count"], 2);
}

#[test]
fn gn_tree_formats() {
    let path = graphs("chain.graph");
    let dot = mshopf(&["gn-tree", path.to_str().unwrap(), "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph gn"));
    let json = json_out(&mshopf(&["gn-tree", path.to_str().unwrap()]));
    assert_eq!(json[0]["depth"], 2);
    let padded = json_out(&mshopf(&["gn-tree", path.to_str().unwrap(), "--pad-gn", "--rho", "4"]));
    assert_eq!(padded[0]["depth"], 4);
    assert_eq!(padded[0]["grade"], json[0]["grade"]);
}

#[test]
fn counterterm_formulas_agree() {
    for amp in ["toy", "symbols"] {
        let o = mshopf(&["counterterms", graphs("chain.graph").to_str().unwrap(), "--amplitude", amp, "--tau", "constant"]);
        assert!(o.status.success(), "{amp}");
        let v = json_out(&o);
        assert_eq!(v[0]["antipode_formula_agrees"], true);
        assert_eq!(v[0]["forest_formula_agrees"], true);
    }
}

#[test]
fn effective_expansion_holds() {
    let o = mshopf(&["effective", "--rho", "1", "--order", "2"]);
    assert!(o.status.success());
    assert_eq!(json_out(&o)["expansion"]["holds"], true);
}

#[test]
fn lemma_on_bubbles() {
    let b = graphs("bubble.graph");
    let o = mshopf(&["lemma", b.to_str().unwrap(), b.to_str().unwrap()]);
    let v = json_out(&o);
    assert_eq!(v["lhs"]["num"], "9");
    assert_eq!(v["lhs"]["den"], "2");
    assert_eq!(v["holds"], true);
}

#[test]
fn verify_small_suite_passes() {
    let o = mshopf(&["verify", "--suite", "hopf", "--max-loops", "2", "--rho", "2"]);
    assert!(o.status.success());
    assert_eq!(json_out(&o)["passed"], true);
}

#[test]
fn catalog_cache_is_reused() {
    let dir = std::env::temp_dir().join(format!("mshopf-cache-{}", std::process::id()));
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_mshopf"))
            .args(["verify", "--suite", "forest", "--max-loops", "2", "--rho", "1"])
            .env("MSHOPF_CATALOG_DIR", &dir)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(dir.join("generators-l2-r1-v4.json").exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn output_is_byte_stable() {
    let eye = graphs("eye.graph");
    let args = ["antipode", eye.to_str().unwrap()];
    assert_eq!(mshopf(&args).stdout, mshopf(&args).stdout);
}

#[test]
fn parse_error_exits_1() {
    let o = mshopf(&["parse", data("broken.graph").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(diagnostic(&o)["error"]["kind"], "parse");
    let missing = mshopf(&["parse", "/nonexistent/x.graph"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn biped_in_renorm_sector_exits_2() {
    let o = mshopf(&["counterterms", graphs("biped.graph").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["error"]["exit"], 2);
}

#[test]
fn bad_flags_exit_2_before_work() {
    let b = graphs("bubble.graph");
    for args in [
        vec!["coproduct", b.to_str().unwrap(), "--format", "dot"],
        vec!["morphism", "--pi-ck", b.to_str().unwrap()],
        vec!["verify", "--suite", "nope"],
        vec!["effective", "--order", "9"],
        vec!["coproduct", b.to_str().unwrap(), "--rho", "-1"],
        vec!["frobnicate"],
    ] {
        let o = mshopf(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(diagnostic(&o)["error"]["message"].is_string());
    }
}

#[test]
fn scale_above_cutoff_exits_2() {
    let o = mshopf(&["coproduct", graphs("chain.graph").to_str().unwrap(), "--rho", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corrupt_catalog_cache_is_a_parse_error() {
    let dir = std::env::temp_dir().join(format!("mshopf-bad-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("generators-l1-r1-v4.json"), "not json").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mshopf"))
        .args(["verify", "--suite", "hopf", "--max-loops", "1", "--rho", "1"])
        .env("MSHOPF_CATALOG_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}
