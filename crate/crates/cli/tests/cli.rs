use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn kmdual(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmdual"))
        .args(args)
        .env("KMDUAL_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn kl_polynomials_of_a2_are_one() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = data("a2.json");
    let out = kmdual(&["kl", "--type", a2.to_str().unwrap(), "--max-length", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 19);
    for e in entries {
        assert_eq!(e["p"], serde_json::json!([1]));
    }
}

#[test]
fn warm_cache_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let b2 = data("b2.json");
    let args = ["kl", "--type", b2.to_str().unwrap(), "--max-length", "4"];
    let cold = kmdual(&args, dir.path());
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some(), "cache was written");
    let warm = kmdual(&args, dir.path());
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = data("a2.json");
    let args = ["bimod", "hom", "01", "10", "--type", a2.to_str().unwrap()];
    let first = kmdual(&args, dir.path());
    let second = kmdual(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json(&first)["matches_pairing"], true);
}

#[test]
fn duality_check_passes_on_a2() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = data("a2.json");
    let out = kmdual(&["duality", "check", "--type", a2.to_str().unwrap(), "--max-length", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["mode"], "transpose");
}

#[test]
fn duality_dump_is_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = data("a1.json");
    let out = kmdual(
        &["duality", "check", "--type", a1.to_str().unwrap(), "--max-length", "1", "--symmetrizable-self", "--dump"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,y,side,degree,weight,dim\n"));
    assert!(text.contains("s0,s0,equivariant,2,2,1"));
    assert!(text.contains("s0,s0,monodromic,0,-2,1"));
}

#[test]
fn bimod_decompose_matches_hecke_on_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = data("a2.json");
    for side in ["equivariant", "monodromic"] {
        let out = kmdual(&["bimod", "decompose", "010", "--type", a2.to_str().unwrap(), "--side", side], dir.path());
        assert_eq!(out.status.code(), Some(0));
        let doc = json(&out);
        assert_eq!(doc["matches_hecke"], true);
        assert_eq!(doc["summands"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn csv_and_latex_tables() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = data("a1.json");
    let a1 = a1.to_str().unwrap();
    let doc = json(&kmdual(&["pairing", "0", "0", "--type", a1, "--basis", "bs"], dir.path()));
    // the pairing of B_s with itself is 1 + v^2
    assert_eq!(doc["pairing"]["terms"], serde_json::json!([[0, 1], [2, 1]]));
    let csv = kmdual(&["pairing", "0", "0", "--type", a1, "--basis", "bs", "--csv"], dir.path());
    let expected = format!("x,y,pairing\ns0,s0,{}\n", doc["pairing"]["text"].as_str().unwrap());
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), expected);
    let latex = kmdual(&["group", "--type", a1, "--latex"], dir.path());
    let text = String::from_utf8(latex.stdout).unwrap();
    assert!(text.starts_with("\\begin{tabular}"));
    assert!(text.trim_end().ends_with("\\end{tabular}"));
}

#[test]
fn parabolic_decomp_of_longest_element() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = data("a2.json");
    let out = kmdual(&["parabolic", "decomp", "010", "--type", a2.to_str().unwrap(), "--theta", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let shifts: Vec<i64> =
        json(&out)["summands"].as_array().unwrap().iter().map(|t| t["shift"].as_i64().unwrap()).collect();
    assert_eq!(shifts, vec![-1, 1]);
}

#[test]
fn missing_gcm_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = kmdual(&["kl", "--type", "/does/not/exist.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn bad_words_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = data("a2.json");
    let out = kmdual(&["bimod", "bs", "05", "--type", a2.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "generator_out_of_range");
}

#[test]
fn symmetrizable_self_needs_symmetrizable_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"cartan": [[2, -1, -1], [-2, 2, -1], [-1, -1, 2]]}"#).unwrap();
    let out = kmdual(&["duality", "check", "--type", path.to_str().unwrap(), "--symmetrizable-self"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"].as_str().unwrap().contains("symmetrizable"));
}
