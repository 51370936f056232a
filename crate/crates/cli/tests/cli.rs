use std::fs;
use std::process::{Command, Output};

fn ringlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringlat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("report is JSON")
}

#[test]
fn analyze_four_element_fixture() {
    let o = ringlat(&["analyze", "--fixture", "decomposed-then-ramified"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["schema"], 1);
    let lattice = r["suites"].as_array().unwrap().iter().find(|s| s["suite"] == "lattice").unwrap();
    assert_eq!(lattice["detail"]["size"], 4);
    let split = r["suites"].as_array().unwrap().iter().find(|s| s["suite"] == "split").unwrap();
    assert_eq!(split["detail"]["points"]["T2"]["split"], false);
    assert_eq!(split["detail"]["points"]["T2"]["psi_bijective"], true);
}

#[test]
fn poset_fixture_is_not_b() {
    let o = ringlat(&["poset", "--fixture", "two-maxima-over-one-prime"]);
    assert_eq!(o.status.code(), Some(0));
    let d = &json(&o)["suites"][0]["detail"];
    assert_eq!(d["profile"]["predicted_size"], 5);
    assert_eq!(d["b_extension"]["linear_above_minimal"], false);
}

#[test]
fn malformed_spec_exits_with_two_and_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"name\": \"x\",\n  \"ambient\": {\"kind\": \"gf\",\n}\n").unwrap();
    let o = ringlat(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.json: line 4"), "{err}");
}

#[test]
fn missing_file_and_wrong_kind_are_input_errors() {
    assert_eq!(ringlat(&["validate", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(ringlat(&["lattice", "--fixture", "two-maxima-over-one-prime"]).status.code(), Some(2));
    assert_eq!(ringlat(&["analyze", "--fixture", "no-such-fixture"]).status.code(), Some(2));
    assert_eq!(ringlat(&["analyze", "--fixture", "f2-in-f4", "--suite", "poset"]).status.code(), Some(2));
}

#[test]
fn unmet_pinned_value_exits_with_one_and_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f4.json");
    fs::write(&path, r#"{"name": "f", "ambient": {"kind": "gf", "parameters": {"q": 4}}}"#).unwrap();
    let p = path.to_str().unwrap();
    let ok = ringlat(&["analyze", p, "--expect", "/lattice/size=2", "--expect", "/split/points/S/split=true"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let bad = ringlat(&["analyze", p, "--expect", "/lattice/size=3"]);
    assert_eq!(bad.status.code(), Some(1));
    let err = String::from_utf8_lossy(&bad.stderr).to_string();
    assert!(err.contains("witness: /lattice/size: expected 3, found 2"), "{err}");
    assert_eq!(json(&bad)["expectations"][0]["origin"], "user");
    let unknown = ringlat(&["analyze", p, "--suite", "lattice", "--expect", "/split/x=1"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["analyze", "--fixture", "f2^2-in-dual-x-f4"][..],
        &["composite", "--fixture", "quasi-prufer-not-split"],
        &["composite", "--fixture", "boolean-times-chain"],
        &["splitters", "--fixture", "f2^3-in-f4^3"],
        &["poset", "--random-tree", "9", "--seed", "7"],
        &["fixtures"],
    ] {
        let (a, b) = (ringlat(args), ringlat(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_and_dot_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let (j, d) = (dir.path().join("r.json"), dir.path().join("r.dot"));
    let o = ringlat(&[
        "splitters",
        "--fixture",
        "f2^2-in-f4^2",
        "--json",
        j.to_str().unwrap(),
        "--dot",
        d.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass splitters"));
    let dot = fs::read_to_string(&d).unwrap();
    assert!(dot.starts_with("digraph") && dot.contains("sigma{M0}"), "{dot}");
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(r["suites"][0]["detail"]["table"].as_array().unwrap().len(), 4);
}

#[test]
fn timing_is_opt_in() {
    let plain = json(&ringlat(&["lattice", "--fixture", "f2-in-f4"]));
    assert!(plain.get("timing_us").is_none());
    let timed = json(&ringlat(&["lattice", "--fixture", "f2-in-f4", "--timing"]));
    assert!(timed["timing_us"]["lattice"].is_number());
}

#[test]
fn fixture_list_carries_origins() {
    let o = ringlat(&["fixtures", "--json", "-"]);
    let list = json(&o);
    let entries = list.as_array().unwrap();
    assert!(entries.len() >= 20);
    let find = |n: &str| entries.iter().find(|e| e["name"] == n).unwrap()["origin"].clone();
    assert_eq!(find("decomposed-then-ramified"), "reference");
    assert_eq!(find("f2-in-f4"), "derived");
    assert_eq!(find("trivial"), "trivial");
}
