use std::process::{Command, Output};

use serde_json::Value;

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = koszul(&full);
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["schema_version"], 1);
    (v, out.status.code().unwrap())
}

#[test]
fn betti_of_frobenius_times_maximal() {
    let (v, code) = json(&["betti", "n=3; pborel(x3^3; 2)"]);
    assert_eq!(code, 0);
    let entries = v["table"]["entries"].as_array().unwrap();
    let b24 = entries.iter().find(|e| e["i"] == 2 && e["j"] == 4).unwrap();
    assert_eq!(b24["dim"], 12);
}

#[test]
fn ideal_can_be_read_from_a_file() {
    let dir = std::env::temp_dir().join(format!("koszul-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ideal.txt");
    std::fs::write(&path, "# two variables\nn=2; (x1,x2)^4\n").unwrap();
    let (v, code) = json(&["betti", &format!("@{}", path.display())]);
    assert_eq!(code, 0);
    assert_eq!(v["ideal"]["gens"].as_array().unwrap().len(), 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn homology_in_one_multidegree() {
    let (v, code) = json(&["--field", "gf:3", "homology", "n=2; (x1,x2)^4", "-i", "2", "--multidegree", "x1^4*x2"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 1);
}

#[test]
fn cycles_report_binomial_strand() {
    let (v, code) = json(&["cycles", "n=4; (x1,x2)*(x1,x2,x3,x4)[2]", "-i", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["max_min_length"], 2);
}

#[test]
fn oversized_search_exits_with_bound_code() {
    let ideal = "n=8; (x3*x4*x5*x6, x2*x4*x5*x6, x1*x2*x4*x6, x1*x2*x3*x4, x1*x2*x3*x5, x1*x3*x5*x6, x7*x8)";
    let (v, code) = json(&["cycles", ideal, "-i", "4"]);
    assert_eq!(code, 3);
    assert_eq!(v["strands"][0]["outcome"], "bound_exceeded");
    assert_eq!(v["strands"][0]["strand_dim"], 49);
}

#[test]
fn pborel_factorization() {
    let (v, code) = json(&["pborel", "--monomial", "x3^3", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["ideal"]["gens"].as_array().unwrap().len(), 9);
    assert_eq!(v["digit_exponents"], true);
}

#[test]
fn chain_agrees_with_betti_corners() {
    let (v, code) = json(&["chain", "n=3; (x1^2,x1*x2,x2^3)"]);
    assert_eq!(code, 0);
    assert_eq!(v["agree"], true);
}

#[test]
fn verify_is_deterministic() {
    let a = koszul(&["verify", "main", "--seed", "7", "--trials", "4"]);
    let b = koszul(&["verify", "main", "--seed", "7", "--trials", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("seed 7: gamma="));
    assert!(text.trim_end().ends_with("PASS main"));
}

#[test]
fn reproduce_targets_pass() {
    for t in ["ill", "four", "obstr"] {
        let (v, code) = json(&["reproduce", t]);
        assert_eq!(code, 0, "{t}");
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(koszul(&["betti", "n=3; (x1,x4)"]).status.code(), Some(2));
    assert_eq!(koszul(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(koszul(&["reproduce", "nosuch"]).status.code(), Some(2));
    assert_eq!(koszul(&["--field", "gf:4", "betti", "n=1; (x1)"]).status.code(), Some(2));
    let out = koszul(&["betti", "n=3; (x1,"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("1:"));
}
