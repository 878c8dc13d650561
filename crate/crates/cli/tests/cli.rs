use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexworld"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (v, out.status.code().unwrap())
}

fn close(v: &Value, x: f64) -> bool {
    (v.as_f64().unwrap() - x).abs() < 1e-6
}

#[test]
fn entropy_of_golden_pair() {
    let (v, code) = json(&["entropy", "--alpha", "(110)", "--beta", "(001)"]);
    assert_eq!(code, 0);
    assert!(close(&v["kappa"], 0.618034));
    assert!(close(&v["h_bits"], 0.694242));
    assert!(close(&v["dim"], 0.694242));
}

#[test]
fn classify_two_point_hole() {
    let (v, code) = json(&["classify", "--a", "1/3", "--b", "2/3"]);
    assert_eq!(code, 0);
    assert_eq!(v["tag"], "ZeroEntropy");
    assert_eq!(v["hole_kind"], "Centred");
    assert_eq!(v["alpha"], "(10)");
}

#[test]
fn classify_hofbauer_pair() {
    let (v, code) = json(&["classify", "--alpha", "1(100)", "--beta", "00(01)"]);
    assert_eq!(code, 0);
    assert_eq!(v["tag"], "HofbauerNonIE");
    assert_eq!(v["ie"], "NotIntrinsicallyErgodic");
    assert_eq!(v["ie_provenance"], "oracle-verified");
    assert_eq!(v["witnesses"]["hofbauer"]["k"], 0);
}

#[test]
fn classify_reports_tower() {
    let (v, _) = json(&["classify", "--alpha", "1(10)", "--beta", "0(01)"]);
    assert_eq!(v["tag"], "Essential");
    assert_eq!(v["level"], 1);
    assert_eq!(v["ratios"][0], "1/2");
    assert!(close(&v["h_bits"], 0.5));
}

#[test]
fn balanced_output_is_exact() {
    let out = run(&["balanced", "--r", "2/5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"count":5,"xi":"01010","zeta":"10010"}"#);
    let (v, _) = json(&["balanced", "--r", "2/5", "--words"]);
    assert_eq!(v["words"].as_array().unwrap().len(), 5);
}

#[test]
fn parse_errors_exit_two_and_name_the_token() {
    let out = run(&["entropy", "--alpha", "(1x0)", "--beta", "(001)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1x0)"));
    let out = run(&["balanced", "--r", "2/4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2/4"));
    let out = run(&["subst", "--r", "1/2", "--seq", "0(2)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0(2)"));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn math_errors_exit_one_with_json() {
    let (v, code) = json(&["entropy", "--alpha", "(101)", "--beta", "(001)"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "NotAdmissible");
    assert_eq!(v["reason"], "AlphaNotParry");
    let (v, code) = json(&["classify", "--alpha", "(101)", "--beta", "(001)"]);
    assert_eq!(code, 1);
    assert_eq!(v["tag"], "Extremal");
    assert_eq!(v["witnesses"]["extremal_reason"], "AlphaNotParry");
    let (v, code) = json(&["classify", "--a", "2/3", "--b", "1/3"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "EndpointOrder");
    let (v, code) = json(&["measure", "--alpha", "(110)", "--beta", "(001)", "--component", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "NoSuchComponent");
}

#[test]
fn components_with_exports() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("golden.edges");
    let dot = dir.path().join("golden.dot");
    let (v, code) = json(&[
        "components",
        "--alpha",
        "(110)",
        "--beta",
        "(001)",
        "--edges",
        edges.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["states"].as_array().unwrap().len(), 4);
    assert!(close(&comps[0]["perron_entropy_bits"], 0.694242));
    let edge_lines = fs::read_to_string(&edges).unwrap();
    assert!(edge_lines.lines().all(|l| l.split(' ').count() == 3));
    let dot_text = fs::read_to_string(&dot).unwrap();
    assert!(dot_text.starts_with("digraph"));
    assert_eq!(dot_text.matches("->").count(), edge_lines.lines().count());
}

#[test]
fn measure_on_full_shift_is_bernoulli() {
    let (v, code) = json(&["measure", "--alpha", "(1)", "--beta", "(0)"]);
    assert_eq!(code, 0);
    assert!(close(&v["entropy_bits"], 1.0));
    for e in v["edges"].as_array().unwrap() {
        assert!(close(&e["probability"], 0.5));
    }
}

#[test]
fn subst_and_expand() {
    let (v, _) = json(&["subst", "--r", "2/5", "--seq", "01"]);
    assert_eq!(v["output"], "0101010010");
    let (v, _) = json(&["subst", "--images", "0->01,1->100", "--seq", "(011)"]);
    assert_eq!(v["output"], "(01100100)");
    let (v, code) = json(&["subst", "--r", "1/2", "--seq", "(011)", "--decode"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "DecodeFailure");
    let (v, _) = json(&["expand", "--base", "1.618033988749895", "--n", "8"]);
    assert_eq!(v["greedy"], "11000000");
    assert_eq!(v["quasi_greedy"]["sequence"], "(10)");
    let (v, _) = json(&["expand", "--x", "1/2"]);
    assert_eq!(v["expansion"], "1(0)");
    let (v, _) = json(&["expand", "--parry", "(10)"]);
    assert!(close(&v["beta"], 1.618_033_988_749_895));
}

#[test]
fn boxes_report() {
    let (v, _) = json(&["boxes", "--omega", "01", "--nu", "100"]);
    assert_eq!(v["diameter_squared"], "5/256");
    let (v, _) = json(&["boxes", "--omega", "01", "--nu", "10"]);
    assert!(close(&v["diameter"], 0.176_776_695));
    let (v, _) = json(&["boxes", "--omega", "01", "--nu", "100", "--r", "1/2", "--other-omega", "01", "--other-nu", "100"]);
    assert_eq!(v["error"], "StrataMismatch");
    let (v, code) = json(&["boxes", "--omega", "01", "--nu", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "InvalidPair");
}

#[test]
fn scan_single_cell() {
    let out = run(&["scan", "--denominator", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,b,tag,level,ratios,kappa,h_bits,dim,ie,ie_provenance");
    assert!(lines[1].starts_with("3/8,5/8,"));
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("# rows=1 "));
}

#[test]
fn scan_writes_file_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let (v, code) = json(&["scan", "--denominator", "21", "--out", path.to_str().unwrap(), "--jobs", "3", "--json"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_u64().unwrap() as usize;
    let csv_text = fs::read_to_string(&path).unwrap();
    let data: Vec<&str> = csv_text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(data.len(), rows);
    assert!(v["counts"]["Essential"].as_u64().unwrap() > 0);
    assert!(!csv_text.contains("FullShift,"));
}

#[test]
fn scan_rejects_small_denominator() {
    assert_eq!(run(&["scan", "--denominator", "3"]).status.code(), Some(2));
}
