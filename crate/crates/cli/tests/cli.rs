//! Golden-file tests for the `mixfrob` binary. Set `UPDATE_GOLDEN=1` to rewrite
//! the expected outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn fixture(name: &str) -> String {
    dir("fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixfrob")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Runs twice, checks the exit code, byte-identical output and the golden file.
fn golden(name: &str, args: &[&str], code: i32) -> Value {
    let first = run(args);
    assert_eq!(first.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&first.stderr));
    let second = run(args);
    assert_eq!(first.stdout, second.stdout, "{name}: output differs between runs");
    let text = stdout(&first);
    let path = dir("golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(text, expected, "{name}: output differs from golden file");
    serde_json::from_str(&text).unwrap()
}

fn all_residuals_zero(v: &Value) -> bool {
    v["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["checks"].as_array().unwrap())
        .all(|c| c["residual"] == "0" && c["pass"] == true)
}

#[test]
fn polytope_check_p2() {
    let v = golden("polytope_check_p2", &["polytope", "check", &fixture("p2.poly")], 0);
    assert_eq!(v["reflexive"], true);
    assert_eq!(v["lattice_points"], serde_json::json!([1, 4, 10, 19]));
}

#[test]
fn malformed_polytope_is_input_error() {
    let o = run(&["polytope", "check", &fixture("bad.poly")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn missing_file_is_input_error() {
    let o = run(&["trtlep", "verify", &fixture("does_not_exist.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_order_is_rejected() {
    let o = run(&["unfold", "universal", &fixture("rank1.json"), "--order", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bmodel_commands() {
    let p = fixture("p2.lp");
    let ring = golden("bmodel_ring_p2", &["bmodel", "ring", &p], 0);
    assert_eq!(ring["graded_dims"], serde_json::json!([1, 1, 1, 0]));
    assert_eq!(golden("bmodel_regular_p2", &["bmodel", "regular", &p], 0)["regular"], true);
    assert_eq!(golden("bmodel_h2_p2", &["bmodel", "h2", &p], 0)["holds"], true);
    let gm = golden("bmodel_gm_p2", &["bmodel", "gm", &p, "--order", "2"], 0);
    assert_eq!(gm["matrices"].as_array().unwrap().len(), 1);
}

#[test]
fn bmodel_pipeline_p2() {
    let v = golden("bmodel_pipeline_p2", &["bmodel", "pipeline", &fixture("p2.lp")], 0);
    assert!(all_residuals_zero(&v));
    assert_eq!(v["mfs"]["charge"], "4");
}

#[test]
fn trtlep_verify() {
    let v = golden("trtlep_verify_frob", &["trtlep", "verify", &fixture("structure_frob.json")], 0);
    assert!(all_residuals_zero(&v));
    golden("trtlep_verify_bad_pairing", &["trtlep", "verify", &fixture("structure_bad_pairing.json")], 1);
}

#[test]
fn trtlep_twist_roundtrip() {
    let v = golden("trtlep_twist_frob", &["trtlep", "twist", &fixture("structure_frob.json"), "--by", "-1/2"], 0);
    let tmp = std::env::temp_dir().join(format!("mixfrob-twist-{}.json", std::process::id()));
    std::fs::write(&tmp, v["structure"].to_string()).unwrap();
    let back = run(&["trtlep", "twist", tmp.to_str().unwrap(), "--by", "1/2"]);
    std::fs::remove_file(&tmp).ok();
    assert_eq!(back.status.code(), Some(0));
    let back: Value = serde_json::from_str(&stdout(&back)).unwrap();
    let original: Value = serde_json::from_str(&std::fs::read_to_string(fixture("structure_frob.json")).unwrap()).unwrap();
    assert_eq!(back["structure"]["v"], original["v"]);
    assert_eq!(back["structure"]["c"], original["c"]);
    assert_eq!(back["structure"]["pairings"], original["pairings"]);
}

#[test]
fn trtlep_rees() {
    let v = golden("trtlep_rees_line", &["trtlep", "rees", &fixture("rees_line.json")], 0);
    assert!(all_residuals_zero(&v));
    assert_eq!(v["levels"], serde_json::json!([1, 0]));
}

#[test]
fn unfold_universal_rank1() {
    let v = golden("unfold_universal_rank1", &["unfold", "universal", &fixture("rank1.json"), "--order", "4"], 0);
    assert!(all_residuals_zero(&v));
    assert_eq!(v["new_vars"], 1);
}

#[test]
fn unfold_run_rank1() {
    let v = golden("unfold_run_rank1", &["unfold", "run", &fixture("rank1_run.json")], 0);
    assert!(all_residuals_zero(&v));
}

#[test]
fn limit_run_jordan() {
    let v = golden("limit_run_jordan2", &["limit", "run", &fixture("jordan2.json")], 0);
    assert_eq!(v["index"], 2);
    assert_eq!(v["structure"]["rank"], 1);
    let t = golden("limit_run_jordan2_twisted", &["limit", "run", &fixture("jordan2.json"), "--twist", "1/2"], 0);
    assert!(all_residuals_zero(&t));
}

#[test]
fn amodel_pipeline_p2() {
    let args = ["amodel", "pipeline", "--fan", &fixture("p2.fan"), "--gw", &fixture("p2.gw"), "--z", "1/10"];
    let v = golden("amodel_pipeline_p2", &args, 0);
    assert!(all_residuals_zero(&v));
    assert_eq!(v["mfs"]["charge"], "4");
    assert_eq!(v["mfs"]["dim"], 3);
}

#[test]
fn amodel_generation_failure() {
    let fan = fixture("p2.fan");
    let gw = fixture("p2_gcfail.gw");
    let o = run(&["amodel", "pipeline", "--fan", &fan, "--gw", &gw, "--z", "1/10", "--cutoff", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generation condition"));
}

#[test]
fn output_file_and_quiet() {
    let tmp = std::env::temp_dir().join(format!("mixfrob-out-{}.json", std::process::id()));
    let o = run(&["-q", "-o", tmp.to_str().unwrap(), "polytope", "check", &fixture("p2.poly")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&tmp).unwrap();
    std::fs::remove_file(&tmp).ok();
    assert_eq!(written, std::fs::read_to_string(dir("golden").join("polytope_check_p2.json")).unwrap());
}

#[test]
fn verify_all() {
    let o = run(&["verify", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 8);
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().filter(|l| l.starts_with("[PASS]")).count(), 8);
}
