//! The `cabtorsion` binary: report shape and exit codes.

mod common;

use std::process::{Command, Output};

use serde_json::Value;

use cabtorsion::exact_arith::ext_field_create;

fn curve_file(name: &str) -> String {
    format!("{}/../../curves/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cabtorsion")).args(args).output().expect("binary runs")
}

fn machine(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--emit", "machine"]);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

#[test]
fn analyze_reports_genus_and_riemann_hurwitz() {
    let (code, v) = machine(&["analyze", "--curve", &curve_file("quartic_f7.json")]);
    assert_eq!(code, 0);
    for key in ["command", "inputs", "results", "conventions", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["results"]["genus"], "3");
    assert_eq!(v["results"]["gaps"], serde_json::json!(["1", "2", "5"]));
    assert_eq!(v["results"]["riemann_hurwitz"]["holds"], true);
}

#[test]
fn count_matches_enumeration() {
    let terms = vec![(0, 3, 1), (0, 1, -1), (4, 0, -1)];
    for m in 1..=2 {
        let field = ext_field_create(7, m).unwrap();
        let expected = 1 + common::affine_points(&field, &terms).len();
        let (code, v) = machine(&["count", "--curve", &curve_file("quartic_f7.json"), "--m", &m.to_string()]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["count"], expected.to_string());
    }
}

#[test]
fn torsion_flags_a_violated_bound() {
    let file = curve_file("quartic_f3.json");
    // Without the inseparability flag the generic bound g (N - 1)^2 = 27 is
    // below the 28 points found.
    let (code, v) = machine(&["torsion", "--curve", &file, "--N", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["torsion"]["count"], "28");
    assert_eq!(v["results"]["violated_bounds"], serde_json::json!(["old"]));

    let (code, v) = machine(&["torsion", "--curve", &file, "--N", "4", "--purely-inseparable"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["violated_bounds"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    let quartic = curve_file("quartic_f7.json");
    assert_eq!(run(&["torsion", "--curve", &quartic, "--N", "4", "--ext-cap", "1"]).status.code(), Some(3));
    assert_eq!(run(&["delta", "--curve", &quartic, "--N", "5", "--r", "9"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--curve", &curve_file("quartic_q.json"), "--m", "1"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--curve", "/nonexistent/curve.json"]).status.code(), Some(1));
    let profile = curve_file("profile_hyperelliptic_f7.json");
    assert_eq!(run(&["bounds", "--profile", &profile, "--N", "5"]).status.code(), Some(1));
}

#[test]
fn level_ranges() {
    let file = curve_file("quartic_q.json");
    for range in ["4..5", "4-5", "4..=5"] {
        let (code, v) = machine(&["delta", "--curve", &file, "--N-range", range]);
        assert_eq!(code, 0, "range {range}");
        assert_eq!(v["results"]["levels"].as_array().unwrap().len(), 2);
    }
    assert_eq!(run(&["delta", "--curve", &file, "--N-range", "6..5"]).status.code(), Some(1));
}

#[test]
fn profile_bounds_round_trip_from_analyze() {
    let (_, analyzed) = machine(&["analyze", "--curve", &curve_file("hyperelliptic_f7.json")]);
    let stored: Value =
        serde_json::from_str(&std::fs::read_to_string(curve_file("profile_hyperelliptic_f7.json")).unwrap()).unwrap();
    assert_eq!(analyzed["results"]["ramification"], stored);

    let args = ["bounds", "--profile", &curve_file("profile_hyperelliptic_f7.json"), "--p", "7", "--N", "5"];
    let (code, v) = machine(&[&args[..], &["--delta-nonzero"]].concat());
    assert_eq!(code, 0);
    let bounds = v["results"]["levels"][0]["bounds"].as_array().unwrap().clone();
    let get = |name: &str| bounds.iter().find(|b| b["formula"] == name).unwrap()["integer_bound"].clone();
    // Tame hyperelliptic: the general bound specializes to the 4g A_s form.
    assert_eq!(get("main"), get("hyperelliptic"));
    assert_eq!(get("main"), get("tame"));
}

#[test]
fn text_output() {
    let out = run(&["count", "--curve", &curve_file("quartic_f7.json"), "--m", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: count\n"));
    assert!(text.contains("  count: 8\n"));
}
