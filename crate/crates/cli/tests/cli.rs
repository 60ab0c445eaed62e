use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn inclex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inclex")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = inclex(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is json");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    v["result"].clone()
}

#[test]
fn zeta_of_p1_at_two() {
    let r = json_ok(&["zeta", "--variety", &data("p1.json"), "-N", "5", "--specialize-q", "2"]);
    let got: Vec<Value> = r["zeta"]["specialized"]["coefficients"].as_array().unwrap().clone();
    let want: Vec<Value> = [1, 3, 7, 15, 31, 63].iter().map(|c| serde_json::json!([c, 1])).collect();
    assert_eq!(got, want);
}

#[test]
fn zeta_inverse_of_p1() {
    let r = json_ok(&["zeta-invert", "--variety", &data("p1.json"), "-N", "4"]);
    assert_eq!(r["inverse"]["display"], serde_json::json!(["1", "-L - 1", "L", "0", "0"]));
}

#[test]
fn stable_limit_of_p1() {
    let r = json_ok(&["stable-limit", "--variety", &data("p1.json"), "-n", "2"]);
    // (1 - t)(1 - L t) at t = L^-2
    assert_eq!(r["display"], "1 - L^-1 - L^-2 + L^-3");
}

#[test]
fn stable_betti_of_p1() {
    let r = json_ok(&["stable-betti", "--variety-cohomology", &data("p1_cohomology.json"), "--dim", "1", "--kmax", "4"]);
    assert_eq!(r["poincare_string"], "1 + t + t^3 + t^4");
}

#[test]
fn mobius_routes_agree_on_circle() {
    let r = json_ok(&["mobius", "--poset", &data("circle.json")]);
    assert_eq!(r["agree"], true);
    let pairs = r["inversion"].as_array().unwrap();
    // 6 diagonal entries and 6 covers
    assert_eq!(pairs.len(), 12);
    assert!(pairs.iter().filter(|p| p["a"] != p["b"]).all(|p| p["mu"] == -1));
}

#[test]
fn nerve_of_circle() {
    let r = json_ok(&["nerve", "--poset", &data("circle.json")]);
    assert_eq!(r["betti"]["0"], 1);
    assert_eq!(r["betti"]["1"], 1);
    assert_eq!(r["chi"], 0);
    assert_eq!(r["center"], Value::Null);
}

#[test]
fn family_output_feeds_back_in() {
    let out = inclex(&["family", "boolean", "--n", "3"]);
    assert!(out.status.success());
    let path = std::env::temp_dir().join(format!("inclex-b3-{}.json", std::process::id()));
    std::fs::write(&path, &out.stdout).unwrap();
    let r = json_ok(&["ss-rank", "--poset", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(r["passes"], true);
}

#[test]
fn family_transforms() {
    let r = json_ok(&["family", "antichain", "--n", "2", "--transform", "cone"]);
    assert_eq!(r["elements"].as_array().unwrap().len(), 3);
    let r = json_ok(&["family", "chain", "--n", "2", "--transform", "barycentric"]);
    assert_eq!(r["elements"].as_array().unwrap().len(), 3);
}

#[test]
fn counts() {
    let r = json_ok(&["count", "--oracle", "smooth-p1", "--q", "2", "--d", "3"]);
    assert_eq!(r["count"], 6);
    // q^d - q^{d-1}
    let r = json_ok(&["count", "--oracle", "squarefree", "--q", "3", "--d", "4"]);
    assert_eq!(r["count"], 54);
}

#[test]
fn density_stabilizes() {
    let r = json_ok(&["density", "--q", "2", "--dmax", "5"]);
    assert_eq!(r["limit"], serde_json::json!([3, 8]));
    assert_eq!(r["first_exact"], 3);
}

#[test]
fn skeletal_compare_small() {
    let r = json_ok(&["ss-skeletal-compare", "--alphabet", "2", "--cutoff", "3"]);
    assert_eq!(r["euler_matches_series_inverse"], true);
}

#[test]
fn check_single_suite() {
    let r = json_ok(&["check", "series"]);
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["suites"].as_array().unwrap().len(), 1);
}

#[test]
fn check_vw_parameters() {
    let r = json_ok(&["check", "vw", "--q", "2", "-N", "4"]);
    assert_eq!(r["passes"], true);
}

#[test]
fn table_format() {
    let out = inclex(&["--format", "table", "count", "--oracle", "squarefree", "--q", "2", "--d", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "result.count\t2"));
}

#[test]
fn output_is_deterministic() {
    let args = ["mobius", "--poset", &data("circle.json")];
    assert_eq!(inclex(&args).stdout, inclex(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(inclex(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(inclex(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(inclex(&["nerve", "--poset", &data("cyclic.json")]).status.code(), Some(2));
    assert_eq!(inclex(&["nerve", "--poset", &data("missing.json")]).status.code(), Some(2));
    assert_eq!(inclex(&["count", "--oracle", "squarefree", "--q", "4", "--d", "2"]).status.code(), Some(2));
    assert_eq!(inclex(&["count", "--oracle", "squarefree", "--q", "2", "--d", "40"]).status.code(), Some(3));
    assert_eq!(inclex(&["--guard-bytes", "1000", "ss-skeletal-compare", "--alphabet", "3", "--cutoff", "4"]).status.code(), Some(3));
}
